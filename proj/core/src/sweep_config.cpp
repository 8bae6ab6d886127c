#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "stiff_relax/errors.hpp"
#include "stiff_relax/sweep.hpp"

namespace stiff_relax {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem",  "q",          "eps",         "eps_decades", "dt",        "dt_inverse",
      "nx",       "dt_over_dx", "n_modes",     "period",      "b",         "t0",
      "t_final",  "error_mode", "c_cfl",       "nv",          "vmax",      "consistency",
      "substeps", "weno_eps",   "b0",          "b_amp",       "sigma0",    "sigma_amp",
      "output",   "timing"};
  return keys;
}

[[noreturn]] void bad(const std::string& sweep, const std::string& key, const std::string& what) {
  throw ConfigError("[" + sweep + "] " + key + ": " + what);
}

double as_number(const toml::node& n, const std::string& sweep, const std::string& key) {
  if (auto v = n.value<double>()) return *v;
  bad(sweep, key, "expected a number");
}

std::vector<double> number_list(const toml::node& n, const std::string& sweep,
                                const std::string& key) {
  const toml::array* arr = n.as_array();
  if (!arr) bad(sweep, key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& item : *arr) out.push_back(as_number(item, sweep, key));
  return out;
}

std::int64_t as_integer(const toml::node& n, const std::string& sweep, const std::string& key) {
  if (auto v = n.value_exact<std::int64_t>()) return *v;
  bad(sweep, key, "expected an integer");
}

SweepConfig parse_table(const std::string& name, const toml::table& t) {
  SweepConfig cfg;
  cfg.name = name;
  cfg.output = name + ".csv";
  for (const auto& [k, node] : t) {
    const std::string key(k.str());
    if (!known_keys().count(key)) bad(name, key, "unknown key");
  }
  auto get = [&](const char* key) { return t.get(key); };

  if (auto n = get("problem")) {
    auto s = n->value<std::string>();
    if (!s) bad(name, "problem", "expected a string");
    cfg.problem = parse_problem(*s);
  } else {
    bad(name, "problem", "missing");
  }
  if (cfg.problem == Problem::nonlinear) cfg.b = 0.2;
  if (cfg.problem == Problem::varcoef) cfg.q = 1;
  if (cfg.finite_volume() || cfg.problem == Problem::varcoef)
    cfg.error_mode = ErrorMode::self_refinement;
  if (cfg.problem == Problem::nonlinear) cfg.t_final = 0.2;
  if (cfg.problem == Problem::bgk) cfg.t_final = 0.1;

  if (auto n = get("q")) cfg.q = static_cast<int>(as_integer(*n, name, "q"));
  if (auto n = get("eps")) cfg.eps = number_list(*n, name, "eps");
  if (auto n = get("eps_decades")) {
    if (!cfg.eps.empty()) bad(name, "eps_decades", "give either eps or eps_decades");
    const auto range = number_list(*n, name, "eps_decades");
    if (range.size() != 2 || range[0] > range[1] || range[0] != std::floor(range[0]) ||
        range[1] != std::floor(range[1]))
      bad(name, "eps_decades", "expected [lo, hi] integer exponents with lo <= hi");
    for (int e = static_cast<int>(range[0]); e <= static_cast<int>(range[1]); ++e)
      cfg.eps.push_back(std::pow(10.0, e));
  }
  if (auto n = get("dt")) cfg.dt = number_list(*n, name, "dt");
  if (auto n = get("dt_inverse")) {
    if (!cfg.dt.empty()) bad(name, "dt_inverse", "give either dt or dt_inverse");
    for (double d : number_list(*n, name, "dt_inverse")) {
      if (!(d > 0.0)) bad(name, "dt_inverse", "entries must be > 0");
      cfg.dt.push_back(1.0 / d);
    }
  }
  if (auto n = get("nx")) {
    const toml::array* arr = n->as_array();
    if (!arr) bad(name, "nx", "expected an array of integers");
    for (const auto& item : *arr) {
      const auto v = as_integer(item, name, "nx");
      if (v <= 0) bad(name, "nx", "entries must be positive");
      cfg.nx.push_back(static_cast<std::size_t>(v));
    }
  }
  if (cfg.problem == Problem::nonlinear) cfg.dt_over_dx = cfg.q >= 3 ? 1.0 / 3.0 : 0.25;
  if (auto n = get("nv")) {
    const auto v = as_integer(*n, name, "nv");
    if (v <= 0) bad(name, "nv", "must be positive");
    cfg.nv = static_cast<std::size_t>(v);
  }
  if (auto n = get("vmax")) cfg.vmax = as_number(*n, name, "vmax");
  if (cfg.problem == Problem::bgk) cfg.dt_over_dx = 1.0 / (3.0 * cfg.vmax);
  if (auto n = get("dt_over_dx")) cfg.dt_over_dx = as_number(*n, name, "dt_over_dx");
  if (auto n = get("n_modes")) cfg.n_modes = static_cast<int>(as_integer(*n, name, "n_modes"));
  if (auto n = get("period")) cfg.period = as_number(*n, name, "period");
  if (auto n = get("b")) cfg.b = as_number(*n, name, "b");
  if (auto n = get("t0")) cfg.t0 = as_number(*n, name, "t0");
  if (auto n = get("t_final")) cfg.t_final = as_number(*n, name, "t_final");
  if (auto n = get("error_mode")) {
    auto s = n->value<std::string>();
    if (!s) bad(name, "error_mode", "expected a string");
    cfg.error_mode = parse_error_mode(*s);
  }
  if (auto n = get("c_cfl")) cfg.c_cfl = as_number(*n, name, "c_cfl");
  if (auto n = get("consistency"))
    cfg.consistency = static_cast<int>(as_integer(*n, name, "consistency"));
  if (auto n = get("substeps")) cfg.substeps = static_cast<int>(as_integer(*n, name, "substeps"));
  if (auto n = get("weno_eps")) cfg.weno_eps = as_number(*n, name, "weno_eps");
  if (auto n = get("b0")) cfg.varcoef.b0 = as_number(*n, name, "b0");
  if (auto n = get("b_amp")) cfg.varcoef.b_amp = as_number(*n, name, "b_amp");
  if (auto n = get("sigma0")) cfg.varcoef.sigma0 = as_number(*n, name, "sigma0");
  if (auto n = get("sigma_amp")) cfg.varcoef.sigma_amp = as_number(*n, name, "sigma_amp");
  if (auto n = get("output")) {
    auto s = n->value<std::string>();
    if (!s || s->empty()) bad(name, "output", "expected a non-empty string");
    cfg.output = *s;
  }
  if (auto n = get("timing")) {
    auto v = n->value<bool>();
    if (!v) bad(name, "timing", "expected true or false");
    cfg.timing = *v;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

std::vector<SweepConfig> parse_sweep_configs(const std::string& toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML syntax error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  std::vector<SweepConfig> out;
  for (const auto& [k, node] : root) {
    const std::string name(k.str());
    const toml::table* t = node.as_table();
    if (!t) throw ConfigError("top-level key '" + name + "' must be a [table]");
    out.push_back(parse_table(name, *t));
  }
  if (out.empty()) throw ConfigError("configuration defines no sweeps");
  return out;
}

std::vector<SweepConfig> load_sweep_configs(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_sweep_configs(ss.str());
}

}  // namespace stiff_relax
