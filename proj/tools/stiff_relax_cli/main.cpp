#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "stiff_relax/bdf_tableau.hpp"
#include "stiff_relax/errors.hpp"
#include "stiff_relax/multiplier.hpp"
#include "stiff_relax/sweep.hpp"

namespace sr = stiff_relax;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedCase = 1;
constexpr int kExitBadConfig = 2;

constexpr double kIdentityTolerance = 1e-12;

struct VerifyOptions {
  int q = 0;  // 0: all orders
  int samples = 100;
  std::string csv;
};

int verify_multipliers(const VerifyOptions& opt) {
  std::vector<int> orders;
  if (opt.q == 0) {
    for (int q = sr::kMinBdfOrder; q <= sr::kMaxBdfOrder; ++q) orders.push_back(q);
  } else {
    orders.push_back(opt.q);
  }
  if (opt.samples < 1) {
    std::cerr << "error: --samples must be >= 1\n";
    return kExitBadConfig;
  }

  std::printf("z* = %.17g\n\n", sr::solve_zstar());
  std::printf("%2s  %10s  %10s  %12s  %12s  %12s  %12s  %s\n", "q", "res_G", "res_A",
              "lmin_G", "lmax_G", "lmin_A", "lmax_A", "status");
  std::ofstream csv;
  if (!opt.csv.empty()) {
    csv.open(opt.csv, std::ios::binary);
    if (!csv) {
      std::cerr << "error: cannot open " << opt.csv << '\n';
      return kExitFailedCase;
    }
    csv << "q,residual_g,residual_a,lambda_min_g,lambda_max_g,lambda_min_a,lambda_max_a,status\n";
  }

  bool all_ok = true;
  for (int q : orders) {
    const sr::MultiplierSet ms = sr::multiplier_set(q);
    const sr::BdfTableau tab = sr::bdf_tableau(q);
    const double rg = sr::verify_identity_g(ms, tab, opt.samples).max();
    const double ra = sr::verify_identity_a(ms, opt.samples).max();
    const sr::EigenExtrema eg = sr::quadratic_form_extrema(ms.g);
    const sr::EigenExtrema ea = sr::quadratic_form_extrema(ms.a);
    const bool ok = rg <= kIdentityTolerance && ra <= kIdentityTolerance && eg.min > 0.0 &&
                    ea.min >= -kIdentityTolerance && ms.d1 > 0.0;
    all_ok = all_ok && ok;
    const char* status = ok ? "ok" : "FAILED";
    std::printf("%2d  %10.3e  %10.3e  %12.6e  %12.6e  %12.6e  %12.6e  %s\n", q, rg, ra, eg.min,
                eg.max, ea.min, ea.max, status);
    if (csv) {
      csv << q << ',' << sr::format_double(rg) << ',' << sr::format_double(ra) << ','
          << sr::format_double(eg.min) << ',' << sr::format_double(eg.max) << ','
          << sr::format_double(ea.min) << ',' << sr::format_double(ea.max) << ',' << status
          << '\n';
    }
  }
  return all_ok ? kExitOk : kExitFailedCase;
}

void print_summary(const sr::SweepConfig& cfg, const std::vector<sr::ErrorRecord>& records) {
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.ok() ? 0 : 1;
  std::printf("[%s] %s q=%d: %zu cases, %zu failed\n", cfg.name.c_str(),
              sr::to_string(cfg.problem).c_str(), cfg.q, records.size(), failed);
}

struct SweepOptions {
  std::string config;
  std::string out = ".";
  int jobs = 1;
  bool timing = false;
};

int sweep(const SweepOptions& opt) {
  std::vector<sr::SweepConfig> configs;
  try {
    configs = sr::load_sweep_configs(opt.config);
  } catch (const sr::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitBadConfig;
  }
  const std::filesystem::path out_dir(opt.out);
  bool any_failed = false;
  for (auto& cfg : configs) {
    if (opt.timing) cfg.timing = true;
    const auto records = sr::run_sweep(cfg, opt.jobs);
    const std::filesystem::path csv_path = out_dir / cfg.output;
    sr::emit_csv(records, csv_path);
    print_summary(cfg, records);
    bool ok = true;
    for (const auto& r : records) ok = ok && r.ok();
    any_failed = any_failed || !ok;
    if (!ok) continue;
    const std::size_t levels = cfg.finite_volume() ? cfg.nx.size() : cfg.dt.size();
    if (levels < 2) continue;
    const sr::OrderEstimate est = sr::estimate_order(records);
    std::filesystem::path order_path = csv_path;
    order_path.replace_filename(csv_path.stem().string() + "_order.csv");
    sr::emit_order_csv(est, order_path);
    std::printf("  %-12s %-14s %s\n", "dt", "max_error", "rate");
    for (std::size_t i = 0; i < est.dt.size(); ++i) {
      if (i == 0)
        std::printf("  %-12.5e %-14.6e\n", est.dt[i], est.max_error[i]);
      else
        std::printf("  %-12.5e %-14.6e %.3f\n", est.dt[i], est.max_error[i], est.rates[i - 1]);
    }
    std::printf("  fitted slope: %.3f\n", est.slope);
  }
  return any_failed ? kExitFailedCase : kExitOk;
}

struct RunOptions {
  std::string problem;
  int q = 2;
  double eps = 1.0;
  double dt = 0.0;
  int n_modes = 40;
  std::size_t nx = 100;
  double b = 0.0;
  bool b_set = false;
  double t0 = 0.0;
  double t_final = 0.0;
  double period = 0.0;
  std::string error_mode;
  std::size_t nv = 60;
  double vmax = 10.0;
  int substeps = 500;
  int consistency = 0;
};

int run(const RunOptions& opt) {
  sr::SweepConfig cfg;
  try {
    cfg.name = "run";
    cfg.problem = sr::parse_problem(opt.problem);
    cfg.q = opt.q;
    cfg.eps = {opt.eps};
    cfg.n_modes = opt.n_modes;
    cfg.period = opt.period;
    cfg.t0 = opt.t0;
    cfg.nv = opt.nv;
    cfg.vmax = opt.vmax;
    cfg.substeps = opt.substeps;
    cfg.consistency = opt.consistency;
    switch (cfg.problem) {
      case sr::Problem::linear:
        cfg.b = 0.6;
        cfg.t_final = 2.0;
        break;
      case sr::Problem::varcoef: cfg.t_final = 1.0; break;
      case sr::Problem::nonlinear:
        cfg.b = 0.2;
        cfg.t_final = 0.2;
        break;
      case sr::Problem::bgk: cfg.t_final = 0.1; break;
    }
    if (opt.b_set) cfg.b = opt.b;
    if (opt.t_final > 0.0) cfg.t_final = opt.t_final;
    cfg.error_mode = cfg.problem == sr::Problem::linear ? sr::ErrorMode::exact
                                                          : sr::ErrorMode::self_refinement;
    if (!opt.error_mode.empty()) cfg.error_mode = sr::parse_error_mode(opt.error_mode);
    if (cfg.finite_volume()) {
      cfg.nx = {opt.nx};
      cfg.dt_over_dx = opt.dt * static_cast<double>(opt.nx) / cfg.domain_length();
    } else {
      cfg.dt = {opt.dt};
    }
    cfg.validate();
  } catch (const sr::ConfigError& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return kExitBadConfig;
  }
  const sr::ErrorRecord r = sr::run_case(cfg, cfg.cases().front());
  sr::write_csv(std::cout, {r});
  return r.ok() ? kExitOk : kExitFailedCase;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMEX-BDF solvers for stiff relaxation systems"};
  app.require_subcommand(1);

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify-multipliers",
                                    "Check the energy-stability multiplier identities");
  verify->add_option("--q", vopt.q, "Scheme order (default: all of 1..4)")
      ->check(CLI::Range(1, 4));
  verify->add_option("--samples", vopt.samples, "Random tuples per identity")
      ->capture_default_str();
  verify->add_option("--csv", vopt.csv, "Also write the table as CSV");

  SweepOptions sopt;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the sweeps of a TOML configuration");
  sweep_cmd->add_option("--config", sopt.config, "Sweep configuration file")->required();
  sweep_cmd->add_option("--out", sopt.out, "Output directory")->capture_default_str();
  sweep_cmd->add_option("--jobs", sopt.jobs, "Concurrent cases")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_flag("--timing", sopt.timing, "Record wall time in the seconds column");

  RunOptions ropt;
  auto* run_cmd = app.add_subcommand("run", "Run a single case and print its CSV record");
  run_cmd->add_option("--problem", ropt.problem, "linear, varcoef, nonlinear or bgk")
      ->required();
  run_cmd->add_option("--q", ropt.q, "Scheme order")->capture_default_str();
  run_cmd->add_option("--eps", ropt.eps, "Relaxation parameter")->capture_default_str();
  run_cmd->add_option("--dt", ropt.dt, "Time step")->required();
  run_cmd->add_option("--n-modes", ropt.n_modes, "Fourier modes |k| <= N")
      ->capture_default_str();
  run_cmd->add_option("--nx", ropt.nx, "Finite-volume cells")->capture_default_str();
  run_cmd->add_option("--b", ropt.b, "Relaxation coefficient b");
  run_cmd->add_option("--t0", ropt.t0, "Start time")->capture_default_str();
  run_cmd->add_option("--t-final", ropt.t_final, "Final time (default per problem)");
  run_cmd->add_option("--period", ropt.period, "Domain length (default per problem)");
  run_cmd->add_option("--error-mode", ropt.error_mode, "exact or self-refinement");
  run_cmd->add_option("--nv", ropt.nv, "Velocity nodes (bgk)")->capture_default_str();
  run_cmd->add_option("--vmax", ropt.vmax, "Velocity cut-off (bgk)")->capture_default_str();
  run_cmd->add_option("--substeps", ropt.substeps, "Bootstrap sub-steps per step")
      ->capture_default_str();
  run_cmd->add_option("--consistency", ropt.consistency,
                      "Initial-data consistency order 1 or 2 (default by q)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadConfig;
  }
  ropt.b_set = run_cmd->count("--b") > 0;

  try {
    if (*verify) return verify_multipliers(vopt);
    if (*sweep_cmd) return sweep(sopt);
    if (*run_cmd) return run(ropt);
  } catch (const sr::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailedCase;
  }
  return kExitOk;
}
