#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "stiff_relax/bdf_tableau.hpp"
#include "stiff_relax/spectral_field.hpp"

namespace stiff_relax {

/// Multiplier data certifying energy stability of IMEX-BDF(q). With the
/// multiplier m(u) = u_q - sum_{j=1}^{q-1} eta_j u_j and real u_0..u_q:
///
///   m(u) * sum_i alpha_i u_i = G(u_1..u_q) - G(u_0..u_{q-1})
///                            + d1 (m(u) - d2 sum_{i<q} gamma_i u_i)^2
///   m(u) * u_q = A(u_2..u_q) - A(u_1..u_{q-1}) + (sum_i c_i u_i)^2
///
/// with G positive definite and A positive semidefinite. Index i of the
/// stored vectors/matrices corresponds to u_{i+1}.
struct MultiplierSet {
  int q = 0;
  Eigen::MatrixXd g;    ///< q x q
  Eigen::MatrixXd a;    ///< (q-1) x (q-1); 0x0 for q = 1
  Eigen::VectorXd eta;  ///< q-1 entries
  Eigen::VectorXd c;    ///< q entries
  double d1 = 0.0;
  double d2 = 0.0;
};

/// The root of the degree-8 polynomial in (0.106, 0.107) that fixes the
/// q = 3 multipliers. Solved by bisection in 50-digit arithmetic.
double solve_zstar();

/// phi(z) evaluated in double precision (for residual checks).
double zstar_polynomial(double z);

/// Sum of |coefficient| * |z|^degree over the terms of phi; the natural
/// scale for a relative residual of phi(z).
double zstar_polynomial_scale(double z);

/// q = 1, 2: exact rationals. q = 3: closed forms in sqrt(30) and z*,
/// evaluated in 50-digit arithmetic and rounded. q = 4: published decimal
/// approximations. Throws UnsupportedOrder for other q.
MultiplierSet multiplier_set(int q);

struct IdentityResidual {
  double sampled = 0.0;      ///< max |LHS - RHS| over random complex tuples
  double coefficient = 0.0;  ///< max |coefficient of u_i u_j| mismatch
  double max() const { return sampled > coefficient ? sampled : coefficient; }
};

/// Residual of the G identity (complex form: real part of the multiplier
/// product against the BDF difference), on `samples` random tuples with
/// entries in the closed unit square, plus the exact monomial comparison.
IdentityResidual verify_identity_g(const MultiplierSet& ms,
                                   const BdfTableau& tab, int samples,
                                   std::uint64_t seed = 20240521);

/// Residual of the A identity, same conventions.
IdentityResidual verify_identity_a(const MultiplierSet& ms, int samples,
                                   std::uint64_t seed = 20240522);

/// Residual of either identity on one caller-supplied tuple u_0..u_q.
double identity_g_residual(const MultiplierSet& ms, const BdfTableau& tab,
                           std::span<const Complex> u);
double identity_a_residual(const MultiplierSet& ms, std::span<const Complex> u);

struct EigenExtrema {
  double min = 0.0;
  double max = 0.0;
};

/// Smallest and largest eigenvalue of a real symmetric matrix by cyclic
/// Jacobi rotations. An empty matrix yields {0, 0}. Throws InvalidArgument
/// for a non-square or asymmetric input.
EigenExtrema quadratic_form_extrema(const Eigen::MatrixXd& m);

/// Discrete Lyapunov functional of the stability argument,
///   E = (1 - b^2) G_U + G_W + (beta dt / eps) A_W.
/// Forms use the unnormalized inner product int_0^L f conj(g) dx.
struct EnergyDiagnostic {
  double g_u = 0.0;
  double g_w = 0.0;
  double a_w = 0.0;
  double energy = 0.0;
};

/// `u_levels` and `w_levels` hold q consecutive levels, oldest first.
EnergyDiagnostic energy_functional(std::span<const SpectralField> u_levels,
                                   std::span<const SpectralField> w_levels,
                                   const MultiplierSet& ms, double b, double dt,
                                   double eps, double beta);

}  // namespace stiff_relax
