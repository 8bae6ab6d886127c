#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "stiff_relax/varcoef.hpp"

namespace stiff_relax::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// b(x) = 0.3 + 0.2 sin x, sigma(x) = 1 + 0.5 cos x on [0, 2 pi), with the
// manufactured solution u~ = sin(x - t) + 1/2, w = 0.3 cos(2x + t). The
// operators F_u, F_w are written out by hand from the (u~, w) equations.
struct Manufactured {
  static double b(double x) { return 0.3 + 0.2 * std::sin(x); }
  static double db(double x) { return 0.2 * std::cos(x); }
  static double sigma(double x) { return 1.0 + 0.5 * std::cos(x); }
  static double u(double x, double t) { return std::sin(x - t) + 0.5; }
  static double ux(double x, double t) { return std::cos(x - t); }
  static double ut(double x, double t) { return -std::cos(x - t); }
  static double w(double x, double t) { return 0.3 * std::cos(2 * x + t); }
  static double wx(double x, double t) { return -0.6 * std::sin(2 * x + t); }
  static double wt(double x, double t) { return -0.3 * std::sin(2 * x + t); }

  static double f_u(double x, double t) {
    const double bb = b(x), bp = db(x), s = std::sqrt(1 - bb * bb);
    return bp * u(x, t) + bb * ux(x, t) + bb * bb * bp / (s * s) * u(x, t) + s * wx(x, t);
  }
  static double f_w(double x, double t) {
    const double bb = b(x), bp = db(x), s = std::sqrt(1 - bb * bb);
    const double ds = -bb * bp / s;
    return ds * u(x, t) + s * ux(x, t) + bb * bp / s * u(x, t) - bb * wx(x, t);
  }
};

inline VarCoefParams manufactured_params(int n) {
  return VarCoefParams::sample(Manufactured::b, Manufactured::sigma, varcoef_grid_points(n),
                               kTwoPi);
}

inline SpectralField project_real(const std::function<double(double)>& f, int n) {
  return project([&f](double x) { return Complex(f(x)); }, n, kTwoPi);
}

// Error at t = 0.5 of the forced first-order scheme against the
// manufactured solution.
inline double manufactured_error(double dt, double eps, int n) {
  using M = Manufactured;
  VarCoefSolver solver(manufactured_params(n), n);
  VarCoefState s{project_real([](double x) { return M::u(x, 0); }, n),
                 project_real([](double x) { return M::w(x, 0); }, n)};
  const double t_final = 0.5;
  const int steps = static_cast<int>(std::lround(t_final / dt));
  for (int i = 0; i < steps; ++i) {
    const double t0 = i * dt, t1 = t0 + dt;
    // Explicit terms at t0; the time derivative of w rides with the
    // implicit target at t1.
    VarCoefForcing f{
        project_real([t0](double x) { return M::ut(x, t0) + M::f_u(x, t0); }, n),
        project_real([t0](double x) { return M::f_w(x, t0); }, n),
        project_real([t1, eps](double x) { return M::sigma(x) * M::w(x, t1) + eps * M::wt(x, t1); },
                     n)};
    solver.step(s, dt, eps, &f);
  }
  const SpectralField ue = project_real([t_final](double x) { return M::u(x, t_final); }, n);
  const SpectralField we = project_real([t_final](double x) { return M::w(x, t_final); }, n);
  return l2_error(s.u, ue) + l2_error(s.w, we);
}

}  // namespace stiff_relax::testing
