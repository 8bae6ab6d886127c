#include "stiff_relax/nonlinear_relax.hpp"

#include <cmath>
#include <numbers>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {

void NonlinearParams::validate() const {
  if (!(eps > 0.0)) throw InvalidArgument("NonlinearParams: eps must be > 0");
  if (!std::isfinite(b)) throw InvalidArgument("NonlinearParams: b must be finite");
  if (!(weno_eps > 0.0)) throw InvalidArgument("NonlinearParams: weno_eps must be > 0");
}

std::pair<CellField, CellField> flux_divergence(const CellField& u, const CellField& v,
                                                double weno_eps) {
  if (!u.same_grid(v)) throw ShapeMismatch("flux_divergence: grid mismatch");
  const std::size_t n = u.cells();
  std::vector<double> r1(n), r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    r1[i] = u.values[i] + v.values[i];
    r2[i] = u.values[i] - v.values[i];
  }
  const auto f1 = weno5_reconstruct(r1, Side::left, weno_eps);
  const auto f2 = weno5_reconstruct(r2, Side::right, weno_eps);
  std::vector<double> flux_u(n), flux_v(n);
  for (std::size_t i = 0; i < n; ++i) {
    flux_u[i] = 0.5 * (f1[i] - f2[i]);  // v at the face
    flux_v[i] = 0.5 * (f1[i] + f2[i]);  // u at the face
  }
  std::pair<CellField, CellField> out{CellField(n, u.length), CellField(n, u.length)};
  flux_difference(flux_u, u.dx(), out.first.values);
  flux_difference(flux_v, u.dx(), out.second.values);
  return out;
}

const NonlinearState& step_bdf_nonlinear(NonlinearHistory& hist, const BdfTableau& tab,
                                         const NonlinearParams& p, double dt) {
  hist.require_full("step_bdf_nonlinear");
  if (hist.order() != tab.q)
    throw ShapeMismatch("step_bdf_nonlinear: history order differs from tableau");
  if (!(dt > 0.0)) throw InvalidArgument("step_bdf_nonlinear: dt must be > 0");
  const CellField& ref = hist[0].u;
  const std::size_t n = ref.cells();
  NonlinearState next{CellField(n, ref.length), CellField(n, ref.length)};
  for (int i = 0; i < tab.q; ++i) {
    const auto& lvl = hist[static_cast<std::size_t>(i)];
    const auto [du, dv] = flux_divergence(lvl.u, lvl.v, p.weno_eps);
    const double a = tab.alpha[static_cast<std::size_t>(i)];
    const double g = dt * tab.gamma[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < n; ++j) {
      next.u.values[j] += -a * lvl.u.values[j] + g * du.values[j];
      next.v.values[j] += -a * lvl.v.values[j] + g * dv.values[j];
    }
  }
  const double r = tab.beta * dt / p.eps;
  for (std::size_t j = 0; j < n; ++j) {
    const double un = next.u.values[j];
    next.v.values[j] = (next.v.values[j] + r * p.b * un * un) / (1.0 + r);
  }
  hist.push(std::move(next), hist.newest_time() + dt);
  return hist.newest();
}

NonlinearSystem::NonlinearSystem(std::size_t cells, double length, NonlinearParams p)
    : cells_(cells), length_(length), p_(p) {
  p_.validate();
  if (cells < kMinWenoCells) throw InvalidArgument("NonlinearSystem: too few cells");
}

std::vector<double> NonlinearSystem::pack(const NonlinearState& s) const {
  if (s.u.cells() != cells_ || s.v.cells() != cells_)
    throw ShapeMismatch("NonlinearSystem::pack: cell count");
  std::vector<double> y(s.u.values);
  y.insert(y.end(), s.v.values.begin(), s.v.values.end());
  return y;
}

NonlinearState NonlinearSystem::unpack(std::span<const double> y) const {
  NonlinearState s{CellField(cells_, length_), CellField(cells_, length_)};
  std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(cells_), s.u.values.begin());
  std::copy(y.begin() + static_cast<std::ptrdiff_t>(cells_), y.end(), s.v.values.begin());
  return s;
}

void NonlinearSystem::explicit_rhs(std::span<const double> y, std::span<double> out) const {
  const NonlinearState s = unpack(y);
  const auto [du, dv] = flux_divergence(s.u, s.v, p_.weno_eps);
  std::copy(du.values.begin(), du.values.end(), out.begin());
  std::copy(dv.values.begin(), dv.values.end(), out.begin() + static_cast<std::ptrdiff_t>(cells_));
}

void NonlinearSystem::implicit_rhs(std::span<const double> y, std::span<double> out) const {
  for (std::size_t i = 0; i < cells_; ++i) {
    const double u = y[i];
    out[i] = 0.0;
    out[cells_ + i] = (p_.b * u * u - y[cells_ + i]) / p_.eps;
  }
}

void NonlinearSystem::solve_implicit(std::span<const double> rhs, double coeff,
                                     std::span<double> y) const {
  const double r = coeff / p_.eps;
  for (std::size_t i = 0; i < cells_; ++i) {
    const double u = rhs[i];
    y[i] = u;
    y[cells_ + i] = (rhs[cells_ + i] + r * p_.b * u * u) / (1.0 + r);
  }
}

NonlinearHistory bootstrap_nonlinear(const NonlinearState& init, int q, double t0, double dt,
                                     const NonlinearParams& p, int substeps) {
  if (q < 1) throw InvalidArgument("bootstrap_nonlinear: q must be >= 1");
  if (substeps < 1) throw InvalidArgument("bootstrap_nonlinear: substeps must be >= 1");
  if (!init.u.same_grid(init.v)) throw ShapeMismatch("bootstrap_nonlinear: grid mismatch");
  NonlinearHistory hist(q);
  hist.push(init, t0);
  if (q == 1) return hist;
  const NonlinearSystem sys(init.u.cells(), init.u.length, p);
  const ImexRkTableau tab = ars443();
  std::vector<double> y = sys.pack(init);
  for (int i = 1; i < q; ++i) {
    imex_rk_advance(sys, tab, y, dt, substeps);
    hist.push(sys.unpack(y), t0 + i * dt);
  }
  return hist;
}

double nonlinear_u0(double x) {
  return 0.5 * std::exp(std::sin(2.0 * std::numbers::pi * x));
}

double nonlinear_u0_dx(double x) {
  const double arg = 2.0 * std::numbers::pi * x;
  return std::numbers::pi * std::cos(arg) * std::exp(std::sin(arg));
}

NonlinearState nonlinear_initial_state(std::size_t cells, const NonlinearParams& p,
                                       int consistency) {
  p.validate();
  if (consistency != 1 && consistency != 2)
    throw InvalidArgument("nonlinear_initial_state: consistency must be 1 or 2");
  const double b = p.b;
  const double eps = consistency == 2 ? p.eps : 0.0;
  NonlinearState s{cell_averages(nonlinear_u0, cells, 1.0),
                   cell_averages(
                       [&](double x) {
                         const double u = nonlinear_u0(x);
                         return b * u * u - eps * (1.0 - 4.0 * b * b * u * u) * nonlinear_u0_dx(x);
                       },
                       cells, 1.0)};
  return s;
}

double total_mass(const CellField& u) {
  double sum = 0.0;
  for (double v : u.values) sum += v;
  return sum * u.dx();
}

}  // namespace stiff_relax
