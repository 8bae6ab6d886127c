#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "stiff_relax/errors.hpp"
#include "stiff_relax/sweep.hpp"

using namespace stiff_relax;

namespace {

SweepConfig one(const std::string& toml) {
  const auto cfgs = parse_sweep_configs(toml);
  REQUIRE(cfgs.size() == 1);
  return cfgs.front();
}

const char* kSmall = R"(
[small]
problem = "linear"
q = 2
eps = [1.0, 1e-6, 1e-2]
dt_inverse = [640, 1280]
n_modes = 16
b = 0.6
t0 = 1.0
t_final = 1.25
)";

std::string csv_text(const std::vector<ErrorRecord>& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

ErrorRecord record(double eps, double dt, double err) {
  ErrorRecord r;
  r.problem = "linear";
  r.q = 2;
  r.eps = eps;
  r.dt = dt;
  r.nx = 40;
  r.error = err;
  return r;
}

}  // namespace

TEST_CASE("config parsing and defaults") {
  const SweepConfig c = one(kSmall);
  CHECK(c.name == "small");
  CHECK(c.problem == Problem::linear);
  CHECK(c.q == 2);
  CHECK(c.dt == std::vector<double>{1.0 / 640, 1.0 / 1280});
  CHECK(c.output == "small.csv");
  CHECK(c.error_mode == ErrorMode::exact);
  CHECK(c.domain_length() == 1.0);
  CHECK_FALSE(c.timing);

  const SweepConfig n = one(R"(
[nl]
problem = "nonlinear"
q = 3
eps = [1e-6, 1.0]
nx = [50, 100]
)");
  CHECK(n.b == 0.2);
  CHECK(n.dt_over_dx == doctest::Approx(1.0 / 3.0));
  CHECK(n.error_mode == ErrorMode::self_refinement);
  CHECK(n.t_final == 0.2);
  CHECK(n.initial_consistency() == 2);

  const SweepConfig g = one(R"(
[kin]
problem = "bgk"
q = 2
eps = [1.0]
nx = [50]
vmax = 10.0
)");
  CHECK(g.dt_over_dx == doctest::Approx(1.0 / 30));
  CHECK(g.domain_length() == 2.0);
  CHECK(g.initial_consistency() == 1);

  CHECK(parse_sweep_configs(std::string(kSmall) + "\n[second]\nproblem = \"linear\"\neps = [1.0]\n"
                                                    "dt = [0.01]\n")
            .size() == 2);
}

TEST_CASE("config errors") {
  auto bad = [](const std::string& body) {
    CHECK_THROWS_AS(parse_sweep_configs("[s]\n" + body), ConfigError);
  };
  bad("problem = \"linear\"\nq = 7\neps = [1.0]\ndt = [0.01]\n");
  bad("problem = \"linear\"\neps = [1.0]\ndt = [0.01]\nbogus = 1\n");
  bad("problem = \"heat\"\neps = [1.0]\ndt = [0.01]\n");
  bad("problem = \"linear\"\neps = []\ndt = [0.01]\n");
  bad("problem = \"linear\"\neps = [-1.0]\ndt = [0.01]\n");
  bad("problem = \"linear\"\neps = [1.0]\ndt = [0.01, 0.02]\n");
  bad("problem = \"linear\"\neps = [1.0]\ndt = [0.3]\n");
  bad("problem = \"linear\"\neps = [1.0]\ndt = [0.01]\nb = 1.2\n");
  bad("problem = \"linear\"\neps = [1.0]\ndt = [0.01]\nerror_mode = \"guess\"\n");
  bad("problem = \"linear\"\neps = [1.0]\ndt = [0.01]\nc_cfl = 1.0\n");
  bad("problem = \"nonlinear\"\neps = [1.0]\nnx = [50]\nerror_mode = \"exact\"\n");
  bad("problem = \"nonlinear\"\neps = [1.0]\nnx = [4]\n");
  bad("problem = \"varcoef\"\nq = 2\neps = [1.0]\ndt = [0.01]\n");
  bad("problem = \"linear\"\neps = [1.0]\ndt = [0.01]\nq = \"two\"\n");
  bad("eps = [1.0]\ndt = [0.01]\n");
  CHECK_THROWS_AS(parse_sweep_configs("[s\nproblem = 1"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_configs("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_configs(""), ConfigError);
  CHECK_THROWS_AS(load_sweep_configs("/nonexistent/file.toml"), ConfigError);
}

TEST_CASE("case expansion") {
  const SweepConfig c = one(kSmall);
  const auto cases = c.cases();
  REQUIRE(cases.size() == 6);
  CHECK(cases[0].eps == 1e-6);
  CHECK(cases[0].dt == 1.0 / 640);
  CHECK(cases[1].dt == 1.0 / 1280);
  CHECK(cases[5].eps == 1.0);

  const SweepConfig d = one(R"(
[d]
problem = "linear"
eps_decades = [-7, 0]
dt = [0.01]
)");
  REQUIRE(d.eps.size() == 8);
  CHECK(d.eps.front() == 1e-7);
  CHECK(d.eps.back() == 1.0);
}

TEST_CASE("sweep records are deterministic and canonical") {
  const SweepConfig c = one(kSmall);
  const auto r1 = run_sweep(c, 1);
  const auto r2 = run_sweep(c, 1);
  const auto r3 = run_sweep(c, 3);
  REQUIRE(r1.size() == 6);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].ok());
    CHECK(r1[i].seconds == 0.0);
    CHECK(r1[i].eps == c.cases()[i].eps);
    CHECK(r1[i].dt == c.cases()[i].dt);
  }
  CHECK(csv_text(r1) == csv_text(r2));
  CHECK(csv_text(r1) == csv_text(r3));

  // Max-over-eps error decreases with dt at second order.
  const OrderEstimate est = estimate_order(r1);
  CHECK(est.slope == doctest::Approx(2.0).epsilon(0.15));
  CHECK(est.max_error[1] <= est.max_error[0] * 1.05);

  // A single-case run reproduces the sweep record.
  CHECK(run_case(c, c.cases()[3]) == r1[3]);
}

TEST_CASE("self-refinement uses one internal reference run per case") {
  const SweepConfig c = one(R"(
[v]
problem = "varcoef"
eps = [1e-3]
dt = [0.002]
n_modes = 8
t_final = 0.1
)");
  const auto r = run_sweep(c, 2);
  REQUIRE(r.size() == 1);
  CHECK(r[0].ok());
  CHECK(r[0].error > 0.0);
  CHECK(r[0].error < 1e-2);
}

TEST_CASE("round-off level error at tiny dt") {
  const SweepConfig c = one(R"(
[t]
problem = "linear"
q = 2
eps = [1.0]
dt = [1e-6]
n_modes = 16
t0 = 1.0
t_final = 1.001
)");
  const auto r = run_sweep(c);
  REQUIRE(r.size() == 1);
  CHECK(r[0].error < 1e-10);
}

TEST_CASE("unstable case is recorded, not thrown") {
  const SweepConfig c = one(R"(
[u]
problem = "linear"
q = 4
eps = [1.0]
dt = [0.5]
n_modes = 40
t_final = 400.0
)");
  const auto r = run_sweep(c);
  REQUIRE(r.size() == 1);
  CHECK(r[0].status == "nonfinite");
  CHECK(std::isnan(r[0].error));
  CHECK_THROWS_AS(estimate_order(r), InvalidArgument);
}

TEST_CASE("CSV emission and parsing") {
  std::ostringstream empty;
  write_csv(empty, {});
  CHECK(empty.str() == std::string(kCsvHeader) + "\n");

  ErrorRecord a = record(1e-7, 1.0 / 3.0, 0.1 + 0.2);
  a.seconds = 1.25;
  const std::string one_line = csv_text({a});
  CHECK(std::count(one_line.begin(), one_line.end(), '\n') == 2);
  CHECK(one_line.find('\r') == std::string::npos);

  ErrorRecord b = record(1.0, 1e-300, 2.2250738585072014e-308);
  b.problem = "bgk";
  b.nv = 60;
  ErrorRecord f = record(0.5, 0.25, std::numeric_limits<double>::quiet_NaN());
  f.status = "nonfinite";
  const std::vector<ErrorRecord> recs{a, b, f};
  std::istringstream is(csv_text(recs));
  const auto back = read_csv(is);
  REQUIRE(back.size() == 3);
  CHECK(back[0] == a);
  CHECK(back[1] == b);
  CHECK(back[2].status == "nonfinite");
  CHECK(std::isnan(back[2].error));

  const auto dir = std::filesystem::temp_directory_path() / "stiff_relax_csv_test";
  std::filesystem::create_directories(dir);
  emit_csv({a, b}, dir / "r.csv");
  const auto parsed = parse_csv(dir / "r.csv");
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0] == a);
  std::filesystem::remove_all(dir);

  std::istringstream wrong("a,b,c\n");
  CHECK_THROWS_AS(read_csv(wrong), InvalidArgument);
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-7) == "1e-07");
  for (double x : {1.0 / 3.0, 2.0 / 7.0, 6.02214076e23, 2.2250738585072014e-308})
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("order estimation") {
  std::vector<ErrorRecord> r;
  for (double eps : {1e-3, 1.0})
    for (int k = 0; k < 4; ++k) {
      const double dt = 0.1 / (1 << k);
      r.push_back(record(eps, dt, (eps == 1.0 ? 3.0 : 1.0) * std::pow(2.0, -3.0 * k)));
    }
  const OrderEstimate e = estimate_order(r);
  CHECK(e.slope == doctest::Approx(3.0).epsilon(1e-12));
  REQUIRE(e.rates.size() == 3);
  for (double rate : e.rates) CHECK(rate == doctest::Approx(3.0));
  CHECK(e.dt.front() == 0.1);
  CHECK(e.max_error.front() == 3.0);

  std::vector<ErrorRecord> flat;
  for (int k = 0; k < 3; ++k) flat.push_back(record(1.0, 0.1 / (1 << k), 0.5));
  CHECK(estimate_order(flat).slope == doctest::Approx(0.0));

  std::vector<ErrorRecord> missing = r;
  missing.pop_back();
  CHECK_THROWS_AS(estimate_order(missing), InvalidArgument);
  CHECK_THROWS_AS(estimate_order({record(1.0, 0.1, 1.0)}), InvalidArgument);

  std::ostringstream os;
  write_order_csv(os, e);
  CHECK(os.str().rfind("dt,max_error,rate\n", 0) == 0);
}

TEST_CASE("enum names") {
  CHECK(to_string(Problem::bgk) == "bgk");
  CHECK(parse_problem("varcoef") == Problem::varcoef);
  CHECK(to_string(ErrorMode::self_refinement) == "self-refinement");
  CHECK(parse_error_mode("exact") == ErrorMode::exact);
  CHECK_THROWS_AS(parse_problem("Linear"), ConfigError);
}
