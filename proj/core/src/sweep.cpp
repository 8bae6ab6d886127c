#include "stiff_relax/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <thread>
#include <tuple>
#include <variant>

#include "stiff_relax/bdf_tableau.hpp"
#include "stiff_relax/bgk.hpp"
#include "stiff_relax/errors.hpp"
#include "stiff_relax/nonlinear_relax.hpp"
#include "stiff_relax/spectral_linear.hpp"
#include "stiff_relax/varcoef.hpp"

namespace stiff_relax {

std::string to_string(Problem p) {
  switch (p) {
    case Problem::linear: return "linear";
    case Problem::varcoef: return "varcoef";
    case Problem::nonlinear: return "nonlinear";
    case Problem::bgk: return "bgk";
  }
  return "unknown";
}

std::string to_string(ErrorMode m) {
  return m == ErrorMode::exact ? "exact" : "self-refinement";
}

Problem parse_problem(const std::string& s) {
  for (Problem p : {Problem::linear, Problem::varcoef, Problem::nonlinear, Problem::bgk})
    if (s == to_string(p)) return p;
  throw ConfigError("unknown problem '" + s + "' (expected linear, varcoef, nonlinear or bgk)");
}

ErrorMode parse_error_mode(const std::string& s) {
  if (s == "exact") return ErrorMode::exact;
  if (s == "self-refinement") return ErrorMode::self_refinement;
  throw ConfigError("unknown error_mode '" + s + "' (expected exact or self-refinement)");
}

double SweepConfig::domain_length() const {
  if (period > 0.0) return period;
  switch (problem) {
    case Problem::varcoef: return 2.0 * std::numbers::pi;
    case Problem::bgk: return kDefaultBgkLength;
    default: return 1.0;
  }
}

int SweepConfig::initial_consistency() const {
  if (consistency != 0) return consistency;
  return q >= 3 ? 2 : 1;
}

namespace {

long step_count(double span, double dt) {
  const double n = span / dt;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-6 * std::max(1.0, rounded)) return -1;
  return static_cast<long>(rounded);
}

double fv_dt(const SweepConfig& cfg, std::size_t nx) {
  return cfg.dt_over_dx * cfg.domain_length() / static_cast<double>(nx);
}

}  // namespace

void SweepConfig::validate() const {
  auto fail = [&](const std::string& msg) { throw ConfigError("[" + name + "] " + msg); };
  if (q < kMinBdfOrder || q > kMaxBdfOrder) fail("q must be in 1..4");
  if (eps.empty()) fail("eps list is empty");
  for (double e : eps)
    if (!(e > 0.0) || !std::isfinite(e)) fail("eps entries must be positive and finite");
  if (!(t_final > t0)) fail("t_final must exceed t0");
  if (!(period >= 0.0)) fail("period must be positive");
  if (substeps < 1) fail("substeps must be >= 1");
  if (!(weno_eps > 0.0)) fail("weno_eps must be > 0");
  if (consistency < 0 || consistency > 2) fail("consistency must be 1 or 2");
  const double span = t_final - t0;

  if (finite_volume()) {
    if (error_mode != ErrorMode::self_refinement)
      fail(to_string(problem) + " problems have no exact solution; use self-refinement");
    if (nx.empty()) fail("nx list is empty");
    if (!dt.empty()) fail("finite-volume sweeps take nx and dt_over_dx, not dt");
    if (!(dt_over_dx > 0.0)) fail("dt_over_dx must be > 0");
    for (std::size_t i = 0; i < nx.size(); ++i) {
      if (nx[i] < kMinWenoCells) fail("nx entries must be >= 5");
      if (i > 0 && nx[i] <= nx[i - 1]) fail("nx list must be strictly ascending");
      for (std::size_t mult : {std::size_t{1}, std::size_t{2}}) {
        const long n = step_count(span, fv_dt(*this, mult * nx[i]));
        if (n < q) fail("t_final - t0 is not a whole number (>= q) of steps for nx=" +
                        std::to_string(mult * nx[i]));
      }
    }
    if (problem == Problem::bgk) {
      if (nv < 2) fail("nv must be >= 2");
      if (!(vmax > 0.0)) fail("vmax must be > 0");
    }
    return;
  }

  if (!nx.empty()) fail("spectral sweeps take dt, not nx");
  if (dt.empty()) fail("dt list is empty");
  if (n_modes < 1) fail("n_modes must be >= 1");
  if (problem == Problem::linear && !(std::abs(b) < 1.0)) fail("|b| must be < 1");
  if (problem == Problem::varcoef) {
    if (q != 1) fail("the variable-coefficient scheme is first order only (q = 1)");
    if (error_mode != ErrorMode::self_refinement)
      fail("varcoef problems have no exact solution; use self-refinement");
    if (!(std::abs(varcoef.b0) + std::abs(varcoef.b_amp) < 1.0)) fail("need |b0| + |b_amp| < 1");
    if (!(varcoef.sigma0 - std::abs(varcoef.sigma_amp) > 0.0))
      fail("need sigma0 - |sigma_amp| > 0");
  }
  const double len = domain_length();
  for (std::size_t i = 0; i < dt.size(); ++i) {
    if (!(dt[i] > 0.0)) fail("dt entries must be > 0");
    if (i > 0 && !(dt[i] < dt[i - 1])) fail("dt list must be strictly descending");
    const double kmax = 2.0 * std::numbers::pi * n_modes / len;
    if (c_cfl && dt[i] * kmax * kmax > *c_cfl)
      fail("dt=" + format_double(dt[i]) + " violates dt (2 pi N / L)^2 <= c_cfl");
    const double levels = error_mode == ErrorMode::self_refinement ? 2 : 1;
    for (double div = 1; div <= levels; div *= 2) {
      const long n = step_count(span, dt[i] / div);
      if (n < q) fail("t_final - t0 is not a whole number (>= q) of steps for dt=" +
                      format_double(dt[i] / div));
    }
  }
}

std::vector<SweepCase> SweepConfig::cases() const {
  std::vector<double> sorted_eps = eps;
  std::sort(sorted_eps.begin(), sorted_eps.end());
  std::vector<SweepCase> out;
  for (double e : sorted_eps) {
    if (finite_volume()) {
      for (std::size_t n : nx) out.push_back({e, fv_dt(*this, n), n});
    } else {
      for (double d : dt) out.push_back({e, d, static_cast<std::size_t>(n_modes)});
    }
  }
  return out;
}

namespace {

using Snapshot = std::variant<ConservedState, VarCoefState, NonlinearState, KineticField>;

struct RunKey {
  double eps;
  double dt;
  std::size_t nx;
  auto operator<=>(const RunKey&) const = default;
};

struct RunOutcome {
  std::optional<Snapshot> state;
  std::string status = "ok";
  double seconds = 0.0;
};

ConservedState linear_initial(const SweepConfig& cfg) {
  const double len = cfg.domain_length();
  const double k = 2.0 * std::numbers::pi / len;
  const double b = cfg.b;
  return {project([k](double x) { return Complex(std::exp(std::sin(k * x))); }, cfg.n_modes, len),
          project([k, b](double x) { return Complex(b * std::exp(std::sin(k * x))); },
                  cfg.n_modes, len)};
}

ConservedState run_linear(const SweepConfig& cfg, double eps, double dt) {
  const LinearParams p{cfg.b, eps};
  p.validate();
  const BdfTableau tab = bdf_tableau(cfg.q);
  LinearHistory hist = bootstrap_linear(linear_initial(cfg), cfg.q, cfg.t0, dt, p);
  const long n = step_count(cfg.t_final - cfg.t0, dt);
  for (long s = cfg.q - 1; s < n; ++s) {
    const MicroMacroState& lvl = step_bdf_linear(hist, tab, p, dt);
    if (!lvl.u.all_finite() || !lvl.w.all_finite())
      throw NumericalFailure("linear solution became non-finite");
  }
  return to_conserved(hist.newest(), cfg.b);
}

VarCoefState run_varcoef(const SweepConfig& cfg, double eps, double dt) {
  const double len = cfg.domain_length();
  const double k = 2.0 * std::numbers::pi / len;
  const VarCoefSpec vc = cfg.varcoef;
  auto b = [k, vc](double x) { return vc.b0 + vc.b_amp * std::sin(k * x); };
  auto sigma = [k, vc](double x) { return vc.sigma0 + vc.sigma_amp * std::cos(k * x); };
  VarCoefSolver solver(VarCoefParams::sample(b, sigma, varcoef_grid_points(cfg.n_modes), len),
                       cfg.n_modes);
  const SpectralField u0 = project([k](double x) { return Complex(std::exp(std::sin(k * x))); },
                                   cfg.n_modes, len);
  const SpectralField v0 = project(
      [k, b](double x) { return Complex(b(x) * std::exp(std::sin(k * x))); }, cfg.n_modes, len);
  VarCoefState s = solver.from_conserved(u0, v0);
  const long n = step_count(cfg.t_final - cfg.t0, dt);
  for (long i = 0; i < n; ++i) solver.step(s, dt, eps);
  return s;
}

NonlinearState run_nonlinear(const SweepConfig& cfg, double eps, std::size_t nx, double dt) {
  NonlinearParams p{cfg.b, eps, cfg.weno_eps};
  p.validate();
  const BdfTableau tab = bdf_tableau(cfg.q);
  const NonlinearState init = nonlinear_initial_state(nx, p, cfg.initial_consistency());
  NonlinearHistory hist = bootstrap_nonlinear(init, cfg.q, cfg.t0, dt, p, cfg.substeps);
  const long n = step_count(cfg.t_final - cfg.t0, dt);
  for (long s = cfg.q - 1; s < n; ++s) {
    const NonlinearState& lvl = step_bdf_nonlinear(hist, tab, p, dt);
    if (!lvl.u.all_finite() || !lvl.v.all_finite())
      throw NumericalFailure("nonlinear solution became non-finite");
  }
  return hist.newest();
}

KineticField run_bgk(const SweepConfig& cfg, double eps, std::size_t nx, double dt) {
  const BgkParams p{eps, cfg.weno_eps};
  p.validate();
  const VelocityGrid vg(cfg.nv, cfg.vmax);
  const BdfTableau tab = bdf_tableau(cfg.q);
  const KineticField init = chapman_init(default_bgk_profile(), eps, vg, nx,
                                         cfg.domain_length(), cfg.initial_consistency());
  BgkHistory hist = bootstrap_bgk(init, cfg.q, cfg.t0, dt, p, vg, cfg.substeps);
  const long n = step_count(cfg.t_final - cfg.t0, dt);
  for (long s = cfg.q - 1; s < n; ++s) step_bdf_bgk(hist, tab, p, dt, vg);
  return hist.newest();
}

RunOutcome execute(const SweepConfig& cfg, const RunKey& key) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (cfg.problem) {
      case Problem::linear: out.state = run_linear(cfg, key.eps, key.dt); break;
      case Problem::varcoef: out.state = run_varcoef(cfg, key.eps, key.dt); break;
      case Problem::nonlinear: out.state = run_nonlinear(cfg, key.eps, key.nx, key.dt); break;
      case Problem::bgk: out.state = run_bgk(cfg, key.eps, key.nx, key.dt); break;
    }
  } catch (const RealizabilityError&) {
    out.status = "realizability";
  } catch (const NumericalFailure&) {
    out.status = "nonfinite";
  } catch (const ConfigError&) {
    throw;
  } catch (const Error&) {
    out.status = "error";
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double exact_error(const SweepConfig& cfg, double eps, const ConservedState& s) {
  const ConservedState ref =
      exact_solution(linear_initial(cfg), cfg.t_final, LinearParams{cfg.b, eps});
  return l2_error(s.u, ref.u) + l2_error(s.v, ref.v);
}

double refinement_error(const Snapshot& coarse, const Snapshot& fine, const VelocityGrid* vg) {
  if (const auto* c = std::get_if<ConservedState>(&coarse)) {
    const auto& f = std::get<ConservedState>(fine);
    return l2_error(c->u, f.u) + l2_error(c->v, f.v);
  }
  if (const auto* c = std::get_if<VarCoefState>(&coarse)) {
    const auto& f = std::get<VarCoefState>(fine);
    return l2_error(c->u, f.u) + l2_error(c->w, f.w);
  }
  if (const auto* c = std::get_if<NonlinearState>(&coarse)) {
    const auto& f = std::get<NonlinearState>(fine);
    return cell_l2_distance(c->u, coarsen_pairs(f.u)) + cell_l2_distance(c->v, coarsen_pairs(f.v));
  }
  const auto& c = std::get<KineticField>(coarse);
  return kinetic_l2_distance(c, coarsen_pairs(std::get<KineticField>(fine)), *vg);
}

RunKey coarse_key(const SweepConfig&, const SweepCase& c) { return {c.eps, c.dt, c.nx}; }

RunKey fine_key(const SweepConfig& cfg, const SweepCase& c) {
  if (cfg.finite_volume()) return {c.eps, fv_dt(cfg, 2 * c.nx), 2 * c.nx};
  return {c.eps, c.dt / 2.0, c.nx};
}

ErrorRecord assemble(const SweepConfig& cfg, const SweepCase& c,
                     const std::map<RunKey, RunOutcome>& runs) {
  ErrorRecord r;
  r.problem = to_string(cfg.problem);
  r.q = cfg.q;
  r.eps = c.eps;
  r.dt = c.dt;
  r.nx = c.nx;
  r.nv = cfg.problem == Problem::bgk ? cfg.nv : 0;

  const RunOutcome& coarse = runs.at(coarse_key(cfg, c));
  double seconds = coarse.seconds;
  std::string status = coarse.status;
  double error = 0.0;
  if (cfg.error_mode == ErrorMode::exact) {
    if (coarse.state) error = exact_error(cfg, c.eps, std::get<ConservedState>(*coarse.state));
  } else {
    const RunOutcome& fine = runs.at(fine_key(cfg, c));
    seconds += fine.seconds;
    if (status == "ok") status = fine.status;
    if (coarse.state && fine.state) {
      const VelocityGrid vg(std::max<std::size_t>(cfg.nv, 2), cfg.vmax);
      error = refinement_error(*coarse.state, *fine.state, &vg);
    }
  }
  if (status == "ok" && !std::isfinite(error)) status = "nonfinite";
  r.error = status == "ok" ? error : std::nan("");
  r.seconds = cfg.timing ? seconds : 0.0;
  r.status = status;
  return r;
}

std::vector<RunKey> required_runs(const SweepConfig& cfg, const std::vector<SweepCase>& cases) {
  std::vector<RunKey> keys;
  for (const auto& c : cases) {
    keys.push_back(coarse_key(cfg, c));
    if (cfg.error_mode == ErrorMode::self_refinement) keys.push_back(fine_key(cfg, c));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

}  // namespace

ErrorRecord run_case(const SweepConfig& cfg, const SweepCase& c) {
  cfg.validate();
  std::map<RunKey, RunOutcome> runs;
  for (const RunKey& k : required_runs(cfg, {c})) runs.emplace(k, execute(cfg, k));
  return assemble(cfg, c, runs);
}

std::vector<ErrorRecord> run_sweep(const SweepConfig& cfg, int jobs) {
  cfg.validate();
  const std::vector<SweepCase> cases = cfg.cases();
  const std::vector<RunKey> keys = required_runs(cfg, cases);
  std::vector<RunOutcome> outcomes(keys.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) outcomes[i] = execute(cfg, keys[i]);
  };
  const std::size_t threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, keys.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::map<RunKey, RunOutcome> runs;
  for (std::size_t i = 0; i < keys.size(); ++i) runs.emplace(keys[i], std::move(outcomes[i]));
  std::vector<ErrorRecord> records;
  records.reserve(cases.size());
  for (const auto& c : cases) records.push_back(assemble(cfg, c, runs));
  return records;
}

OrderEstimate estimate_order(const std::vector<ErrorRecord>& records) {
  std::map<double, std::map<double, double>, std::greater<>> grid;  // dt -> eps -> error
  std::vector<double> all_eps;
  for (const auto& r : records) {
    if (!r.ok()) throw InvalidArgument("estimate_order: failed record at eps=" +
                                       format_double(r.eps) + ", dt=" + format_double(r.dt));
    grid[r.dt][r.eps] = r.error;
    all_eps.push_back(r.eps);
  }
  std::sort(all_eps.begin(), all_eps.end());
  all_eps.erase(std::unique(all_eps.begin(), all_eps.end()), all_eps.end());
  if (grid.size() < 2) throw InvalidArgument("estimate_order: need at least two dt levels");

  OrderEstimate est;
  for (const auto& [dt, row] : grid) {
    if (row.size() != all_eps.size())
      throw InvalidArgument("estimate_order: missing eps values at dt=" + format_double(dt));
    double worst = 0.0;
    for (const auto& [e, err] : row) worst = std::max(worst, err);
    est.dt.push_back(dt);
    est.max_error.push_back(worst);
  }
  for (std::size_t i = 1; i < est.dt.size(); ++i)
    est.rates.push_back(std::log(est.max_error[i - 1] / est.max_error[i]) /
                        std::log(est.dt[i - 1] / est.dt[i]));

  const double n = static_cast<double>(est.dt.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < est.dt.size(); ++i) {
    const double x = std::log(est.dt[i]), y = std::log(est.max_error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return est;
}

}  // namespace stiff_relax
