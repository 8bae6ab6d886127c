#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stiff_relax/bdf_tableau.hpp"
#include "stiff_relax/history.hpp"
#include "stiff_relax/imex_rk.hpp"
#include "stiff_relax/weno.hpp"

namespace stiff_relax {

/// Nv midpoints v_j = -vmax + (j + 1/2) dv of [-vmax, vmax], dv = 2 vmax / Nv.
class VelocityGrid {
 public:
  VelocityGrid(std::size_t nv, double vmax);

  std::size_t size() const noexcept { return nodes_.size(); }
  double vmax() const noexcept { return vmax_; }
  double dv() const noexcept { return dv_; }
  double operator[](std::size_t j) const { return nodes_[j]; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }

 private:
  double vmax_;
  double dv_;
  std::vector<double> nodes_;
};

/// f(x_i, v_j) on a periodic x grid of [0, L) times a velocity grid, stored
/// velocity-major: value(i, j) = data[j * nx + i].
struct KineticField {
  std::size_t nx = 0;
  std::size_t nv = 0;
  double length = 1.0;
  std::vector<double> data;

  KineticField() = default;
  KineticField(std::size_t cells, std::size_t velocities, double domain_length);

  double dx() const noexcept { return length / static_cast<double>(nx); }
  double& operator()(std::size_t i, std::size_t j) { return data[j * nx + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data[j * nx + i]; }
  std::span<double> row(std::size_t j) { return {data.data() + j * nx, nx}; }
  std::span<const double> row(std::size_t j) const { return {data.data() + j * nx, nx}; }
  bool same_grid(const KineticField& o) const noexcept {
    return nx == o.nx && nv == o.nv && length == o.length;
  }
  bool all_finite() const;
  /// Smallest value; negative entries are allowed but worth flagging.
  double min_value() const;
};

/// Conserved moments U = (rho, rho u, rho u^2 + rho T) per cell (d = 1).
struct Moments {
  std::vector<double> rho;
  std::vector<double> momentum;
  std::vector<double> energy;

  std::size_t cells() const noexcept { return rho.size(); }
  double velocity(std::size_t i) const { return momentum[i] / rho[i]; }
  double temperature(std::size_t i) const {
    const double u = velocity(i);
    return energy[i] / rho[i] - u * u;
  }
  /// Throws RealizabilityError unless rho > 0 and T > 0 in every cell.
  void check_realizable() const;
  static Moments from_primitive(std::span<const double> rho, std::span<const double> u,
                                std::span<const double> temp);
};

/// Velocity quadrature sum_j f(., v_j) (1, v_j, v_j^2) dv. Throws
/// RealizabilityError for vacuum or non-positive temperature.
Moments moments(const KineticField& f, const VelocityGrid& vg);

/// Same quadrature without the realizability check.
Moments raw_moments(const KineticField& f, const VelocityGrid& vg);

/// rho / sqrt(2 pi T) exp(-(v - u)^2 / (2T)) at every (cell, node).
KineticField maxwellian(const Moments& m, const VelocityGrid& vg, double length);

/// -v df/dx with per-velocity upwind WENO5 fluxes in conservative form.
KineticField transport_rhs(const KineticField& f, const VelocityGrid& vg,
                           double weno_eps = kDefaultWenoEpsilon);

struct BgkParams {
  double eps = 1.0;
  double weno_eps = kDefaultWenoEpsilon;

  void validate() const;
};

using BgkHistory = BdfHistory<KineticField>;

/// One IMEX-BDF step. The moments of the new level follow from the
/// explicit part alone (the collision operator conserves them), which fixes
/// the new Maxwellian; f then has a closed-form update.
const KineticField& step_bdf_bgk(BgkHistory& hist, const BdfTableau& tab, const BgkParams& p,
                                 double dt, const VelocityGrid& vg);

/// Smooth macroscopic profile (rho, u, T, dT/dx) as functions of x.
struct BgkProfile {
  std::function<double(double)> rho;
  std::function<double(double)> u;
  std::function<double(double)> temperature;
  std::function<double(double)> temperature_dx;
};

/// rho = 1 + 0.2 sin(pi x), u = 1, T = 1 / rho on [0, 2).
BgkProfile default_bgk_profile();
inline constexpr double kDefaultBgkLength = 2.0;

/// Initial data consistent to order 1 (`consistency` 1: the Maxwellian) or
/// order eps (`consistency` 2: Maxwellian times
/// 1 - eps ((v-u)^2 / (2T) - 3/2) (v-u) T_x / T). Values are x-cell
/// averages by Gauss-Legendre quadrature.
KineticField chapman_init(const BgkProfile& profile, double eps, const VelocityGrid& vg,
                          std::size_t nx, double length, int consistency);

/// Same formula from per-cell moments, with T_x from 6th-order central
/// differences of the cell temperatures. Values are point values at centres.
KineticField chapman_init(const Moments& m, double eps, const VelocityGrid& vg,
                          double length, int consistency);

/// The semi-discrete BGK system as an ImexSystem over KineticField::data.
class BgkSystem final : public ImexSystem {
 public:
  BgkSystem(std::size_t nx, double length, VelocityGrid vg, BgkParams p);

  std::size_t size() const override { return nx_ * vg_.size(); }
  void explicit_rhs(std::span<const double> y, std::span<double> out) const override;
  void implicit_rhs(std::span<const double> y, std::span<double> out) const override;
  void solve_implicit(std::span<const double> rhs, double coeff,
                      std::span<double> y) const override;

 private:
  KineticField wrap(std::span<const double> y) const;

  std::size_t nx_;
  double length_;
  VelocityGrid vg_;
  BgkParams p_;
};

/// q levels at t0 + i dt starting from `init`, the later ones produced by
/// ARS(4,4,3) sub-stepping.
BgkHistory bootstrap_bgk(const KineticField& init, int q, double t0, double dt,
                         const BgkParams& p, const VelocityGrid& vg,
                         int substeps = kBootstrapSubsteps);

/// Totals sum_i U_i dx of mass, momentum and energy.
struct ConservedTotals {
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};
ConservedTotals conserved_totals(const KineticField& f, const VelocityGrid& vg);

/// Pairwise x-averaging of a 2nx field onto nx cells (velocity grid kept).
KineticField coarsen_pairs(const KineticField& fine);

/// sqrt(sum (a - b)^2 dx dv).
double kinetic_l2_distance(const KineticField& a, const KineticField& b,
                           const VelocityGrid& vg);

}  // namespace stiff_relax
