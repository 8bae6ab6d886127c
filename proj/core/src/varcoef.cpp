#include "stiff_relax/varcoef.hpp"

#include <algorithm>
#include <cmath>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {

VarCoefParams VarCoefParams::sample(const std::function<double(double)>& b,
                                    const std::function<double(double)>& sigma,
                                    std::size_t points, double period) {
  if (points == 0) throw InvalidArgument("VarCoefParams: zero points");
  VarCoefParams p;
  p.period = period;
  p.b_samples.resize(points);
  p.sigma_samples.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double x = period * static_cast<double>(j) / static_cast<double>(points);
    p.b_samples[j] = b(x);
    p.sigma_samples[j] = sigma(x);
  }
  p.b1 = 0.0;
  for (double v : p.b_samples) p.b1 = std::max(p.b1, std::abs(v));
  const auto [lo, hi] = std::minmax_element(p.sigma_samples.begin(), p.sigma_samples.end());
  p.sigma0 = *lo;
  p.sigma1 = *hi;
  p.validate();
  return p;
}

void VarCoefParams::validate() const {
  if (!(period > 0.0)) throw InvalidArgument("VarCoefParams: period must be > 0");
  if (b_samples.empty() || b_samples.size() != sigma_samples.size())
    throw ShapeMismatch("VarCoefParams: b and sigma sample counts differ");
  for (std::size_t j = 0; j < b_samples.size(); ++j) {
    if (!std::isfinite(b_samples[j]) || !std::isfinite(sigma_samples[j]))
      throw InvalidArgument("VarCoefParams: non-finite coefficient sample");
    if (!(std::abs(b_samples[j]) <= b1) || !(b1 < 1.0))
      throw InvalidArgument("VarCoefParams: |b| must stay below b1 < 1");
    if (!(sigma_samples[j] >= sigma0) || !(sigma_samples[j] <= sigma1) || !(sigma0 > 0.0))
      throw InvalidArgument("VarCoefParams: sigma must lie in [sigma0, sigma1], sigma0 > 0");
  }
}

std::size_t varcoef_grid_points(int max_mode) { return projection_points(max_mode); }

VarCoefSolver::VarCoefSolver(VarCoefParams params, int max_mode)
    : params_(std::move(params)),
      max_mode_(max_mode),
      grid_(varcoef_grid_points(max_mode), params_.period) {
  params_.validate();
  const std::size_t m = grid_.points();
  if (params_.b_samples.size() != m)
    throw ShapeMismatch("VarCoefSolver: coefficients must be sampled on varcoef_grid_points(N)");

  // b' by spectral differentiation of the sampled b, on all resolvable modes.
  const int coef_modes = static_cast<int>((m - 1) / 2);
  std::vector<Complex> bs(params_.b_samples.begin(), params_.b_samples.end());
  const SpectralField db = derivative(grid_.to_spectral(bs, coef_modes));
  const std::vector<Complex> db_phys = grid_.to_physical(db);

  b_.resize(m);
  sqrt_1mb2_.resize(m);
  coef_u_.resize(m);
  coef_w_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double b = params_.b_samples[j];
    const double dbj = db_phys[j].real();
    const double s2 = 1.0 - b * b;
    b_[j] = b;
    sqrt_1mb2_[j] = std::sqrt(s2);
    coef_u_[j] = b * b * dbj / s2;
    coef_w_[j] = b * dbj / std::sqrt(s2);
  }
  std::vector<Complex> sig(params_.sigma_samples.begin(), params_.sigma_samples.end());
  sigma_hat_ = grid_.to_spectral(sig, std::min(2 * max_mode_, coef_modes));
}

SpectralField VarCoefSolver::product(const std::vector<Complex>& coeff,
                                     const std::vector<Complex>& field) const {
  std::vector<Complex> prod(field.size());
  for (std::size_t j = 0; j < field.size(); ++j) prod[j] = coeff[j] * field[j];
  return grid_.to_spectral(prod, max_mode_);
}

VarCoefState VarCoefSolver::explicit_terms(const VarCoefState& s) const {
  if (s.u.max_mode() != max_mode_ || !s.u.same_shape(s.w) || s.u.period() != period())
    throw ShapeMismatch("VarCoefSolver: state shape mismatch");
  const auto u = grid_.to_physical(s.u);
  const auto wx = grid_.to_physical(derivative(s.w));

  // F_u = d/dx(b u~) + b^2 b' / (1 - b^2) u~ + sqrt(1 - b^2) w_x
  VarCoefState f{derivative(product(b_, u)), product(coef_u_, u)};
  f.u += f.w;
  f.u += product(sqrt_1mb2_, wx);
  // F_w = d/dx(sqrt(1 - b^2) u~) + b b' / sqrt(1 - b^2) u~ - b w_x
  f.w = derivative(product(sqrt_1mb2_, u));
  f.w += product(coef_w_, u);
  f.w -= product(b_, wx);
  return f;
}

SpectralField VarCoefSolver::apply_sigma(const SpectralField& w) const {
  SpectralField out(w.max_mode(), w.period());
  const int n = w.max_mode();
  const int sm = sigma_hat_.max_mode();
  for (int k = -n; k <= n; ++k) {
    Complex acc = 0.0;
    for (int m = -n; m <= n; ++m)
      if (std::abs(k - m) <= sm) acc += sigma_hat_[k - m] * w[m];
    out[k] = acc;
  }
  return out;
}

const Eigen::PartialPivLU<Eigen::MatrixXcd>& VarCoefSolver::implicit_lu(double dt,
                                                                       double eps) {
  const std::pair<double, double> key{dt, eps};
  if (cached_key_ && *cached_key_ == key) return lu_;
  const int n = max_mode_;
  const int size = 2 * n + 1;
  const int sm = sigma_hat_.max_mode();
  const double r = dt / eps;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(size, size);
  for (int k = -n; k <= n; ++k)
    for (int m = -n; m <= n; ++m)
      if (std::abs(k - m) <= sm) a(k + n, m + n) += r * sigma_hat_[k - m];
  lu_.compute(a);
  cached_key_ = key;
  return lu_;
}

void VarCoefSolver::step(VarCoefState& s, double dt, double eps,
                         const VarCoefForcing* forcing) {
  if (!(dt > 0.0) || !(eps > 0.0))
    throw InvalidArgument("VarCoefSolver::step: dt and eps must be > 0");
  const VarCoefState f = explicit_terms(s);
  const int n = max_mode_;
  Eigen::VectorXcd rhs(2 * n + 1);
  for (int k = -n; k <= n; ++k) {
    s.u[k] -= dt * f.u[k];
    rhs(k + n) = s.w[k] - dt * f.w[k];
  }
  if (forcing) {
    for (int k = -n; k <= n; ++k) {
      s.u[k] += dt * forcing->explicit_u[k];
      rhs(k + n) += dt * forcing->explicit_w[k] + (dt / eps) * forcing->relax_target[k];
    }
  }
  const Eigen::VectorXcd w = implicit_lu(dt, eps).solve(rhs);
  for (int k = -n; k <= n; ++k) s.w[k] = w(k + n);
  if (!s.u.all_finite() || !s.w.all_finite())
    throw NumericalFailure("VarCoefSolver::step: non-finite state");
}

VarCoefState VarCoefSolver::from_conserved(const SpectralField& u,
                                           const SpectralField& v) const {
  const auto up = grid_.to_physical(u);
  const auto vp = grid_.to_physical(v);
  std::vector<Complex> ut(up.size()), w(up.size());
  for (std::size_t j = 0; j < up.size(); ++j) {
    ut[j] = sqrt_1mb2_[j] * up[j];
    w[j] = vp[j] - b_[j] * up[j];
  }
  return {grid_.to_spectral(ut, max_mode_), grid_.to_spectral(w, max_mode_)};
}

std::pair<SpectralField, SpectralField> VarCoefSolver::to_conserved(
    const VarCoefState& s) const {
  const auto ut = grid_.to_physical(s.u);
  const auto w = grid_.to_physical(s.w);
  std::vector<Complex> u(ut.size()), v(ut.size());
  for (std::size_t j = 0; j < ut.size(); ++j) {
    u[j] = ut[j] / sqrt_1mb2_[j];
    v[j] = w[j] + b_[j] * u[j];
  }
  return {grid_.to_spectral(u, max_mode_), grid_.to_spectral(v, max_mode_)};
}

}  // namespace stiff_relax
