#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stiff_relax {

enum class Problem { linear, varcoef, nonlinear, bgk };
enum class ErrorMode { exact, self_refinement };

std::string to_string(Problem p);
std::string to_string(ErrorMode m);
Problem parse_problem(const std::string& s);      ///< throws ConfigError
ErrorMode parse_error_mode(const std::string& s);  ///< throws ConfigError

/// Smooth coefficient fields b(x) = b0 + b_amp sin x, sigma(x) = sigma0 +
/// sigma_amp cos x of the variable-coefficient problem, on [0, 2 pi).
struct VarCoefSpec {
  double b0 = 0.3;
  double b_amp = 0.2;
  double sigma0 = 1.0;
  double sigma_amp = 0.5;
};

/// One (eps, dt, grid) point of a sweep. For spectral problems `nx` is
/// the mode bound N.
struct SweepCase {
  double eps = 1.0;
  double dt = 0.0;
  std::size_t nx = 0;
};

struct SweepConfig {
  std::string name = "sweep";
  Problem problem = Problem::linear;
  int q = 2;
  std::vector<double> eps;
  std::vector<double> dt;       ///< spectral problems; sorted descending
  std::vector<std::size_t> nx;  ///< finite-volume problems; sorted ascending
  double dt_over_dx = 0.0;      ///< finite-volume coupling dt = dt_over_dx * dx
  int n_modes = 40;
  double period = 0.0;  ///< 0 selects the problem default
  double b = 0.6;
  double t0 = 0.0;
  double t_final = 1.0;
  ErrorMode error_mode = ErrorMode::exact;
  std::optional<double> c_cfl;  ///< spectral runs require dt (2 pi N / L)^2 <= c_cfl
  std::size_t nv = 60;
  double vmax = 10.0;
  int consistency = 0;  ///< initial-data consistency order; 0 picks by q
  int substeps = 500;
  double weno_eps = 1e-6;
  VarCoefSpec varcoef;
  std::string output;  ///< CSV file name, relative to the output directory
  bool timing = false;  ///< record wall time; off keeps CSV output reproducible

  double domain_length() const;
  int initial_consistency() const;
  bool finite_volume() const noexcept {
    return problem == Problem::nonlinear || problem == Problem::bgk;
  }
  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
  /// Cartesian product eps x grid in canonical order: eps ascending, then
  /// dt descending.
  std::vector<SweepCase> cases() const;
};

struct ErrorRecord {
  std::string problem;
  int q = 0;
  double eps = 0.0;
  double dt = 0.0;
  std::size_t nx = 0;
  std::size_t nv = 0;
  double error = 0.0;
  double seconds = 0.0;
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
  bool operator==(const ErrorRecord&) const = default;
};

/// Builds the solver, bootstraps, steps to t_final and measures the error
/// per cfg.error_mode. Solver failures yield a record with a failure
/// status instead of an exception.
ErrorRecord run_case(const SweepConfig& cfg, const SweepCase& c);

/// Runs all cases, `jobs` at a time. Reference runs shared by
/// self-refinement cases are computed once. Output order is canonical.
std::vector<ErrorRecord> run_sweep(const SweepConfig& cfg, int jobs = 1);

struct OrderEstimate {
  std::vector<double> dt;         ///< descending
  std::vector<double> max_error;  ///< max over eps at each dt
  std::vector<double> rates;      ///< pairwise log ratios, size dt.size() - 1
  double slope = 0.0;             ///< least-squares slope of log error vs log dt
};

/// Throws InvalidArgument for fewer than two dt levels, failed records or
/// an incomplete eps x dt grid.
OrderEstimate estimate_order(const std::vector<ErrorRecord>& records);

inline constexpr const char* kCsvHeader = "problem,q,eps,dt,nx,nv,error,seconds,status";

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

void write_csv(std::ostream& os, const std::vector<ErrorRecord>& records);
void emit_csv(const std::vector<ErrorRecord>& records, const std::filesystem::path& path);
std::vector<ErrorRecord> read_csv(std::istream& is);
std::vector<ErrorRecord> parse_csv(const std::filesystem::path& path);

/// Order table with header `dt,max_error,rate`.
void write_order_csv(std::ostream& os, const OrderEstimate& est);
void emit_order_csv(const OrderEstimate& est, const std::filesystem::path& path);

/// Loads every sweep table of a TOML file. Throws ConfigError on syntax
/// errors, unknown keys or invalid values.
std::vector<SweepConfig> load_sweep_configs(const std::filesystem::path& path);
std::vector<SweepConfig> parse_sweep_configs(const std::string& toml_text);

}  // namespace stiff_relax
