#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stiff_relax/spectral_field.hpp"

namespace stiff_relax {

/// Coefficient fields of the variable-coefficient relaxation system
///   u_t + v_x = 0,   v_t + u_x = sigma(x) (b(x) u - v) / eps,
/// sampled on the uniform product grid of a solver with N modes.
struct VarCoefParams {
  double period = 0.0;
  std::vector<double> b_samples;
  std::vector<double> sigma_samples;
  double b1 = 0.0;      ///< max |b|
  double sigma0 = 0.0;  ///< min sigma
  double sigma1 = 0.0;  ///< max sigma

  /// Samples b and sigma on `points` equispaced nodes of [0, L) and fills
  /// the bounds. Throws InvalidArgument unless b1 < 1 and sigma0 > 0.
  static VarCoefParams sample(const std::function<double(double)>& b,
                              const std::function<double(double)>& sigma,
                              std::size_t points, double period);

  void validate() const;
};

/// Product grid size for N modes; wide enough that products of P_N fields
/// with coefficients resolved by 2N modes project without aliasing.
std::size_t varcoef_grid_points(int max_mode);

/// State (u~, w) with u~ = sqrt(1 - b^2) u and w = v - b u.
struct VarCoefState {
  SpectralField u;
  SpectralField w;
};

/// Optional source terms for manufactured-solution runs. The step adds
/// dt * explicit_* to the right-hand sides and (dt / eps) * relax_target to
/// the w equation, so a solution with sigma w relaxing to a prescribed
/// target can be forced consistently in eps.
struct VarCoefForcing {
  SpectralField explicit_u;
  SpectralField explicit_w;
  SpectralField relax_target;
};

/// First-order IMEX Fourier-Galerkin scheme for the variable-coefficient
/// system in (u~, w) form: convection and the zeroth-order coefficient
/// terms explicit, -(sigma / eps) w implicit. Products are evaluated on a
/// varcoef_grid_points(N) grid and projected back to P_N; the implicit
/// operator I + (dt / eps) P_N sigma P_N is factored once per (dt, eps).
class VarCoefSolver {
 public:
  VarCoefSolver(VarCoefParams params, int max_mode);

  int max_mode() const noexcept { return max_mode_; }
  double period() const noexcept { return params_.period; }
  const VarCoefParams& params() const noexcept { return params_; }

  /// P_N of the explicit operators (F_u, F_w) applied to a state.
  VarCoefState explicit_terms(const VarCoefState& s) const;

  /// P_N(sigma w).
  SpectralField apply_sigma(const SpectralField& w) const;

  /// One step of size dt, in place.
  void step(VarCoefState& s, double dt, double eps,
            const VarCoefForcing* forcing = nullptr);

  /// Converts (u, v) data to (u~, w) and back.
  VarCoefState from_conserved(const SpectralField& u, const SpectralField& v) const;
  std::pair<SpectralField, SpectralField> to_conserved(const VarCoefState& s) const;

 private:
  SpectralField product(const std::vector<Complex>& coeff,
                        const std::vector<Complex>& field) const;
  const Eigen::PartialPivLU<Eigen::MatrixXcd>& implicit_lu(double dt, double eps);

  VarCoefParams params_;
  int max_mode_;
  FourierGrid grid_;
  std::vector<Complex> b_, sqrt_1mb2_, coef_u_, coef_w_;
  SpectralField sigma_hat_;
  std::optional<std::pair<double, double>> cached_key_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

}  // namespace stiff_relax
