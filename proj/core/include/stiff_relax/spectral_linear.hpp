#pragma once

#include <Eigen/Dense>

#include "stiff_relax/bdf_tableau.hpp"
#include "stiff_relax/history.hpp"
#include "stiff_relax/spectral_field.hpp"

namespace stiff_relax {

/// Linear relaxation system
///   u_t + v_x = 0,   v_t + u_x = (b u - v) / eps,   |b| < 1, eps > 0,
/// stepped in the micro-macro variables (u, w = v - b u).
struct LinearParams {
  double b = 0.0;
  double eps = 1.0;

  void validate() const;
};

/// A (u, w) pair of spectral fields sharing N and L.
struct MicroMacroState {
  SpectralField u;
  SpectralField w;
};

/// A (u, v) pair in the original variables.
struct ConservedState {
  SpectralField u;
  SpectralField v;
};

MicroMacroState to_micro_macro(const ConservedState& s, double b);
ConservedState to_conserved(const MicroMacroState& s, double b);

using LinearHistory = BdfHistory<MicroMacroState>;

/// One IMEX-BDF step of the Fourier-Galerkin scheme. Convection
/// d/dx(b u + w), d/dx((1 - b^2) u - b w) is explicit; the relaxation
/// -w/eps is implicit. The new level is pushed onto `hist` and returned.
const MicroMacroState& step_bdf_linear(LinearHistory& hist, const BdfTableau& tab,
                                       const LinearParams& p, double dt);

/// The explicit multistep scheme sum alpha_i U^{n+i} + dt sum gamma_i
/// d/dx(b U^{n+i}) = 0 that the IMEX scheme reduces to as eps -> 0.
const SpectralField& step_limit_linear(BdfHistory<SpectralField>& hist,
                                       const BdfTableau& tab, double b, double dt);

/// Propagator exp(M t) of one Fourier mode of the (u, v) system,
///   M = [[0, -i k], [-i k + b/eps, -1/eps]],  k = 2 pi m / L.
/// Uses the two-eigenvalue closed form, switching to a scaling-and-squaring
/// Taylor series when the eigenvalues nearly coincide.
Eigen::Matrix2cd mode_propagator(double wavenumber, double t, const LinearParams& p);

/// Scaling-and-squaring Taylor evaluation of exp(M t); exposed for tests.
Eigen::Matrix2cd mode_propagator_series(double wavenumber, double t,
                                        const LinearParams& p);

/// Exact solution at time t of the semi-discrete (Fourier-Galerkin) system
/// from initial data `init`, mode by mode.
ConservedState exact_solution(const ConservedState& init, double t,
                              const LinearParams& p);

/// History of q levels sampled from the exact solution at t0 + i dt,
/// i = 0..q-1.
LinearHistory bootstrap_linear(const ConservedState& init, int q, double t0,
                               double dt, const LinearParams& p);

/// dt * k_max^2 with k_max = 2 pi N / L; the spectral CFL number.
double spectral_cfl_number(double dt, int max_mode, double period);

/// Squared normalized L2 norm ||u||^2 + ||w||^2 of a level.
double level_norm_squared(const MicroMacroState& s);

}  // namespace stiff_relax
