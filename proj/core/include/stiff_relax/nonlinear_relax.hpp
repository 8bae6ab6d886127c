#pragma once

#include <utility>

#include "stiff_relax/bdf_tableau.hpp"
#include "stiff_relax/history.hpp"
#include "stiff_relax/imex_rk.hpp"
#include "stiff_relax/weno.hpp"

namespace stiff_relax {

/// Nonlinear relaxation system
///   u_t + v_x = 0,   v_t + u_x = (b u^2 - v) / eps.
struct NonlinearParams {
  double b = 0.2;
  double eps = 1.0;
  double weno_eps = kDefaultWenoEpsilon;

  void validate() const;
};

struct NonlinearState {
  CellField u;
  CellField v;
};

using NonlinearHistory = BdfHistory<NonlinearState>;

/// Conservative WENO5 divergence of the flux (v, u), returned as
/// (-dv/dx, -du/dx). The flux is split along the characteristics u + v
/// (speed +1) and u - v (speed -1), each reconstructed upwind.
std::pair<CellField, CellField> flux_divergence(const CellField& u, const CellField& v,
                                                double weno_eps = kDefaultWenoEpsilon);

/// One IMEX-BDF step. u is explicit; the relaxation is linear in v once
/// the new u is known, so the implicit part has a closed form.
const NonlinearState& step_bdf_nonlinear(NonlinearHistory& hist, const BdfTableau& tab,
                                         const NonlinearParams& p, double dt);

/// The semi-discrete system as an ImexSystem over the packed vector
/// (u_0..u_{n-1}, v_0..v_{n-1}).
class NonlinearSystem final : public ImexSystem {
 public:
  NonlinearSystem(std::size_t cells, double length, NonlinearParams p);

  std::size_t size() const override { return 2 * cells_; }
  void explicit_rhs(std::span<const double> y, std::span<double> out) const override;
  void implicit_rhs(std::span<const double> y, std::span<double> out) const override;
  void solve_implicit(std::span<const double> rhs, double coeff,
                      std::span<double> y) const override;

  std::vector<double> pack(const NonlinearState& s) const;
  NonlinearState unpack(std::span<const double> y) const;

 private:
  std::size_t cells_;
  double length_;
  NonlinearParams p_;
};

/// q levels at t0 + i dt, the first being `init`, later ones produced by
/// ARS(4,4,3) with dt / substeps sub-steps.
NonlinearHistory bootstrap_nonlinear(const NonlinearState& init, int q, double t0, double dt,
                                     const NonlinearParams& p,
                                     int substeps = kBootstrapSubsteps);

/// u0(x) = exp(sin 2 pi x) / 2 on [0, 1) and its derivative.
double nonlinear_u0(double x);
double nonlinear_u0_dx(double x);

/// Initial cell averages. `consistency` 1 gives v = b u0^2; 2 adds the
/// first-order correction -eps (1 - 4 b^2 u0^2) u0'.
NonlinearState nonlinear_initial_state(std::size_t cells, const NonlinearParams& p,
                                       int consistency);

/// Total mass sum u_i dx.
double total_mass(const CellField& u);

}  // namespace stiff_relax
