#include "stiff_relax/bgk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {

VelocityGrid::VelocityGrid(std::size_t nv, double vmax) : vmax_(vmax) {
  if (nv < 2) throw InvalidArgument("VelocityGrid: need at least 2 nodes");
  if (!(vmax > 0.0)) throw InvalidArgument("VelocityGrid: vmax must be > 0");
  dv_ = 2.0 * vmax / static_cast<double>(nv);
  nodes_.resize(nv);
  for (std::size_t j = 0; j < nv; ++j)
    nodes_[j] = -vmax + (static_cast<double>(j) + 0.5) * dv_;
  // Mirror pairs must be exact negatives.
  for (std::size_t j = 0; j < nv / 2; ++j) nodes_[nv - 1 - j] = -nodes_[j];
  if (nv % 2 == 1) nodes_[nv / 2] = 0.0;
}

KineticField::KineticField(std::size_t cells, std::size_t velocities, double domain_length)
    : nx(cells), nv(velocities), length(domain_length), data(cells * velocities, 0.0) {
  if (cells == 0 || velocities == 0) throw InvalidArgument("KineticField: empty grid");
  if (!(domain_length > 0.0)) throw InvalidArgument("KineticField: length must be > 0");
}

bool KineticField::all_finite() const {
  return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
}

double KineticField::min_value() const { return *std::min_element(data.begin(), data.end()); }

void Moments::check_realizable() const {
  for (std::size_t i = 0; i < cells(); ++i) {
    if (!(rho[i] > 0.0))
      throw RealizabilityError("non-positive density in cell " + std::to_string(i));
    if (!(temperature(i) > 0.0))
      throw RealizabilityError("non-positive temperature in cell " + std::to_string(i));
  }
}

Moments Moments::from_primitive(std::span<const double> rho, std::span<const double> u,
                                std::span<const double> temp) {
  if (rho.size() != u.size() || rho.size() != temp.size())
    throw ShapeMismatch("Moments::from_primitive: size mismatch");
  Moments m;
  m.rho.assign(rho.begin(), rho.end());
  m.momentum.resize(rho.size());
  m.energy.resize(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    m.momentum[i] = rho[i] * u[i];
    m.energy[i] = rho[i] * (u[i] * u[i] + temp[i]);
  }
  m.check_realizable();
  return m;
}

Moments raw_moments(const KineticField& f, const VelocityGrid& vg) {
  if (f.nv != vg.size()) throw ShapeMismatch("moments: velocity grid mismatch");
  Moments m;
  m.rho.assign(f.nx, 0.0);
  m.momentum.assign(f.nx, 0.0);
  m.energy.assign(f.nx, 0.0);
  for (std::size_t j = 0; j < f.nv; ++j) {
    const double v = vg[j];
    const auto row = f.row(j);
    for (std::size_t i = 0; i < f.nx; ++i) {
      m.rho[i] += row[i];
      m.momentum[i] += row[i] * v;
      m.energy[i] += row[i] * v * v;
    }
  }
  const double dv = vg.dv();
  for (std::size_t i = 0; i < f.nx; ++i) {
    m.rho[i] *= dv;
    m.momentum[i] *= dv;
    m.energy[i] *= dv;
  }
  return m;
}

Moments moments(const KineticField& f, const VelocityGrid& vg) {
  Moments m = raw_moments(f, vg);
  m.check_realizable();
  return m;
}

KineticField maxwellian(const Moments& m, const VelocityGrid& vg, double length) {
  m.check_realizable();
  KineticField out(m.cells(), vg.size(), length);
  for (std::size_t i = 0; i < m.cells(); ++i) {
    const double u = m.velocity(i);
    const double t = m.temperature(i);
    const double amp = m.rho[i] / std::sqrt(2.0 * std::numbers::pi * t);
    for (std::size_t j = 0; j < vg.size(); ++j) {
      const double c = vg[j] - u;
      out(i, j) = amp * std::exp(-c * c / (2.0 * t));
    }
  }
  return out;
}

KineticField transport_rhs(const KineticField& f, const VelocityGrid& vg, double weno_eps) {
  if (f.nv != vg.size()) throw ShapeMismatch("transport_rhs: velocity grid mismatch");
  if (f.nx < kMinWenoCells) throw InvalidArgument("transport_rhs: need at least 5 cells");
  KineticField out(f.nx, f.nv, f.length);
  std::vector<double> flux(f.nx);
  for (std::size_t j = 0; j < f.nv; ++j) {
    upwind_face_flux(f.row(j), vg[j], flux, weno_eps);
    flux_difference(flux, f.dx(), out.row(j));
  }
  return out;
}

void BgkParams::validate() const {
  if (!(eps > 0.0)) throw InvalidArgument("BgkParams: eps must be > 0");
  if (!(weno_eps > 0.0)) throw InvalidArgument("BgkParams: weno_eps must be > 0");
}

const KineticField& step_bdf_bgk(BgkHistory& hist, const BdfTableau& tab, const BgkParams& p,
                                 double dt, const VelocityGrid& vg) {
  hist.require_full("step_bdf_bgk");
  if (hist.order() != tab.q)
    throw ShapeMismatch("step_bdf_bgk: history order differs from tableau");
  if (!(dt > 0.0)) throw InvalidArgument("step_bdf_bgk: dt must be > 0");
  const KineticField& ref = hist[0];
  KineticField rhs(ref.nx, ref.nv, ref.length);
  for (int i = 0; i < tab.q; ++i) {
    const KineticField& lvl = hist[static_cast<std::size_t>(i)];
    const KineticField tr = transport_rhs(lvl, vg, p.weno_eps);
    const double a = tab.alpha[static_cast<std::size_t>(i)];
    const double g = dt * tab.gamma[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < rhs.data.size(); ++k)
      rhs.data[k] += -a * lvl.data[k] + g * tr.data[k];
  }
  // The collision term has zero moments, so U^{n+q} = <rhs phi>.
  const KineticField m = maxwellian(moments(rhs, vg), vg, ref.length);
  const double c = tab.beta * dt / p.eps;
  for (std::size_t k = 0; k < rhs.data.size(); ++k)
    rhs.data[k] = (rhs.data[k] + c * m.data[k]) / (1.0 + c);
  if (!rhs.all_finite()) throw NumericalFailure("step_bdf_bgk: non-finite values");
  hist.push(std::move(rhs), hist.newest_time() + dt);
  return hist.newest();
}

BgkProfile default_bgk_profile() {
  constexpr double pi = std::numbers::pi;
  BgkProfile p;
  p.rho = [](double x) { return 1.0 + 0.2 * std::sin(pi * x); };
  p.u = [](double) { return 1.0; };
  p.temperature = [](double x) { return 1.0 / (1.0 + 0.2 * std::sin(pi * x)); };
  p.temperature_dx = [](double x) {
    const double r = 1.0 + 0.2 * std::sin(pi * x);
    return -0.2 * pi * std::cos(pi * x) / (r * r);
  };
  return p;
}

namespace {

double chapman_value(double rho, double u, double t, double t_dx, double eps, double v,
                     int consistency) {
  const double c = v - u;
  const double m = rho / std::sqrt(2.0 * std::numbers::pi * t) * std::exp(-c * c / (2.0 * t));
  if (consistency == 1) return m;
  return m * (1.0 - eps * (c * c / (2.0 * t) - 1.5) * c * t_dx / t);
}

void check_consistency(int consistency, double eps) {
  if (consistency != 1 && consistency != 2)
    throw InvalidArgument("chapman_init: consistency must be 1 or 2");
  if (!(eps >= 0.0)) throw InvalidArgument("chapman_init: eps must be >= 0");
}

}  // namespace

KineticField chapman_init(const BgkProfile& profile, double eps, const VelocityGrid& vg,
                          std::size_t nx, double length, int consistency) {
  check_consistency(consistency, eps);
  KineticField out(nx, vg.size(), length);
  const double h = out.dx();
  for (std::size_t i = 0; i < nx; ++i) {
    const double mid = (static_cast<double>(i) + 0.5) * h;
    for (std::size_t g = 0; g < 5; ++g) {
      const double x = mid + 0.5 * h * detail::kGaussNodes[g];
      const double rho = profile.rho(x), u = profile.u(x), t = profile.temperature(x);
      if (!(rho > 0.0) || !(t > 0.0))
        throw RealizabilityError("chapman_init: non-realizable profile");
      const double t_dx = consistency == 2 ? profile.temperature_dx(x) : 0.0;
      const double w = 0.5 * detail::kGaussWeights[g];
      for (std::size_t j = 0; j < vg.size(); ++j)
        out(i, j) += w * chapman_value(rho, u, t, t_dx, eps, vg[j], consistency);
    }
  }
  return out;
}

KineticField chapman_init(const Moments& m, double eps, const VelocityGrid& vg,
                          double length, int consistency) {
  check_consistency(consistency, eps);
  m.check_realizable();
  const std::size_t nx = m.cells();
  KineticField out(nx, vg.size(), length);
  std::vector<double> temp(nx);
  for (std::size_t i = 0; i < nx; ++i) temp[i] = m.temperature(i);
  const std::vector<double> t_dx = central_derivative6(temp, out.dx());
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < vg.size(); ++j)
      out(i, j) = chapman_value(m.rho[i], m.velocity(i), temp[i], t_dx[i], eps, vg[j],
                                consistency);
  return out;
}

BgkSystem::BgkSystem(std::size_t nx, double length, VelocityGrid vg, BgkParams p)
    : nx_(nx), length_(length), vg_(std::move(vg)), p_(p) {
  p_.validate();
  if (nx < kMinWenoCells) throw InvalidArgument("BgkSystem: need at least 5 cells");
}

KineticField BgkSystem::wrap(std::span<const double> y) const {
  KineticField f(nx_, vg_.size(), length_);
  std::copy(y.begin(), y.end(), f.data.begin());
  return f;
}

void BgkSystem::explicit_rhs(std::span<const double> y, std::span<double> out) const {
  const KineticField tr = transport_rhs(wrap(y), vg_, p_.weno_eps);
  std::copy(tr.data.begin(), tr.data.end(), out.begin());
}

void BgkSystem::implicit_rhs(std::span<const double> y, std::span<double> out) const {
  const KineticField f = wrap(y);
  const KineticField m = maxwellian(moments(f, vg_), vg_, length_);
  for (std::size_t k = 0; k < f.data.size(); ++k) out[k] = (m.data[k] - f.data[k]) / p_.eps;
}

void BgkSystem::solve_implicit(std::span<const double> rhs, double coeff,
                               std::span<double> y) const {
  const KineticField r = wrap(rhs);
  const KineticField m = maxwellian(moments(r, vg_), vg_, length_);
  const double c = coeff / p_.eps;
  for (std::size_t k = 0; k < r.data.size(); ++k) y[k] = (r.data[k] + c * m.data[k]) / (1.0 + c);
}

BgkHistory bootstrap_bgk(const KineticField& init, int q, double t0, double dt,
                         const BgkParams& p, const VelocityGrid& vg, int substeps) {
  if (q < 1) throw InvalidArgument("bootstrap_bgk: q must be >= 1");
  if (substeps < 1) throw InvalidArgument("bootstrap_bgk: substeps must be >= 1");
  BgkHistory hist(q);
  hist.push(init, t0);
  if (q == 1) return hist;
  const BgkSystem sys(init.nx, init.length, vg, p);
  const ImexRkTableau tab = ars443();
  std::vector<double> y = init.data;
  for (int i = 1; i < q; ++i) {
    imex_rk_advance(sys, tab, y, dt, substeps);
    KineticField f(init.nx, init.nv, init.length);
    f.data = y;
    hist.push(std::move(f), t0 + i * dt);
  }
  return hist;
}

ConservedTotals conserved_totals(const KineticField& f, const VelocityGrid& vg) {
  const Moments m = raw_moments(f, vg);
  ConservedTotals t;
  for (std::size_t i = 0; i < m.cells(); ++i) {
    t.mass += m.rho[i];
    t.momentum += m.momentum[i];
    t.energy += m.energy[i];
  }
  const double dx = f.dx();
  t.mass *= dx;
  t.momentum *= dx;
  t.energy *= dx;
  return t;
}

KineticField coarsen_pairs(const KineticField& fine) {
  if (fine.nx % 2 != 0) throw ShapeMismatch("coarsen_pairs: odd cell count");
  KineticField out(fine.nx / 2, fine.nv, fine.length);
  for (std::size_t j = 0; j < fine.nv; ++j)
    for (std::size_t i = 0; i < out.nx; ++i)
      out(i, j) = 0.5 * (fine(2 * i, j) + fine(2 * i + 1, j));
  return out;
}

double kinetic_l2_distance(const KineticField& a, const KineticField& b,
                           const VelocityGrid& vg) {
  if (!a.same_grid(b)) throw ShapeMismatch("kinetic_l2_distance: grid mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    const double d = a.data[k] - b.data[k];
    sum += d * d;
  }
  return std::sqrt(sum * a.dx() * vg.dv());
}

}  // namespace stiff_relax
