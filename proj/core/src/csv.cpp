#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "stiff_relax/errors.hpp"
#include "stiff_relax/sweep.hpp"

namespace stiff_relax {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InvalidArgument("read_csv: bad number '" + s + "'");
  return x;
}

template <class Int>
Int parse_int(const std::string& s) {
  Int x{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InvalidArgument("read_csv: bad integer '" + s + "'");
  return x;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ErrorRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.problem << ',' << r.q << ',' << format_double(r.eps) << ',' << format_double(r.dt)
       << ',' << r.nx << ',' << r.nv << ',' << format_double(r.error) << ','
       << format_double(r.seconds) << ',' << r.status << '\n';
  }
}

void emit_csv(const std::vector<ErrorRecord>& records, const std::filesystem::path& path) {
  std::ofstream os = open_for_write(path);
  write_csv(os, records);
  if (!os.flush()) throw Error("write failed: " + path.string());
}

std::vector<ErrorRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader)
    throw InvalidArgument("read_csv: missing or unexpected header");
  std::vector<ErrorRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string col; std::getline(ss, col, ',');) cols.push_back(col);
    if (cols.size() != 9) throw InvalidArgument("read_csv: expected 9 columns in '" + line + "'");
    ErrorRecord r;
    r.problem = cols[0];
    r.q = parse_int<int>(cols[1]);
    r.eps = parse_double(cols[2]);
    r.dt = parse_double(cols[3]);
    r.nx = parse_int<std::size_t>(cols[4]);
    r.nv = parse_int<std::size_t>(cols[5]);
    r.error = parse_double(cols[6]);
    r.seconds = parse_double(cols[7]);
    r.status = cols[8];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ErrorRecord> parse_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  return read_csv(is);
}

void write_order_csv(std::ostream& os, const OrderEstimate& est) {
  os << "dt,max_error,rate\n";
  for (std::size_t i = 0; i < est.dt.size(); ++i) {
    os << format_double(est.dt[i]) << ',' << format_double(est.max_error[i]) << ',';
    if (i > 0) os << format_double(est.rates[i - 1]);
    os << '\n';
  }
}

void emit_order_csv(const OrderEstimate& est, const std::filesystem::path& path) {
  std::ofstream os = open_for_write(path);
  write_order_csv(os, est);
  if (!os.flush()) throw Error("write failed: " + path.string());
}

}  // namespace stiff_relax
