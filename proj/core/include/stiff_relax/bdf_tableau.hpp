#pragma once

#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

namespace stiff_relax {

using Rational = boost::rational<std::int64_t>;

/// Coefficients of the q-th order IMEX-BDF scheme
///
///   sum_{i=0..q} alpha_i U^{n+i} + dt sum_{i<q} gamma_i F(U^{n+i})
///       = beta dt S(U^{n+q})
///
/// where F is the explicitly treated convection and S the implicit
/// relaxation. alpha has q+1 entries (alpha_q = 1), gamma has q entries.
struct BdfTableau {
  int q = 0;
  std::vector<double> alpha;
  std::vector<double> gamma;
  double beta = 0.0;
};

/// Same coefficients held as exact rationals.
struct ExactBdfTableau {
  int q = 0;
  std::vector<Rational> alpha;
  std::vector<Rational> gamma;
  Rational beta;

  BdfTableau to_double() const;
  bool operator==(const ExactBdfTableau&) const = default;
};

inline constexpr int kMinBdfOrder = 1;
inline constexpr int kMaxBdfOrder = 4;

/// Tabulated rational coefficients for q = 1..4.
/// Throws UnsupportedOrder otherwise.
ExactBdfTableau bdf_tableau_exact(int q);
BdfTableau bdf_tableau(int q);

/// Builds the coefficients by expanding the generating polynomials
///   alpha(z) = beta * sum_{j=1..q} (1/j) z^{q-j} (z-1)^j
///   gamma(z) = beta * (z^q - (z-1)^q),   beta = 1 / sum_{j=1..q} 1/j
/// in exact rational arithmetic.
ExactBdfTableau bdf_from_polynomials(int q);

}  // namespace stiff_relax
