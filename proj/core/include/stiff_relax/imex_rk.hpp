#pragma once

#include <span>
#include <string>
#include <vector>

namespace stiff_relax {

/// Butcher data of an IMEX Runge-Kutta pair. The implicit part is
/// diagonally implicit: a_implicit is lower triangular.
struct ImexRkTableau {
  std::string name;
  int stages = 0;
  std::vector<std::vector<double>> a_explicit;
  std::vector<std::vector<double>> a_implicit;
  std::vector<double> b_explicit;
  std::vector<double> b_implicit;
  std::vector<double> c;
};

/// ARS(4,4,3) of Ascher, Ruuth and Spiteri: third order, stiffly accurate,
/// L-stable implicit part. Stored in the padded five-stage form whose first
/// stage is the explicit copy of y_n.
ImexRkTableau ars443();

/// A split ODE system y' = F(y) + S(y) with a non-stiff F and a stiff S
/// whose implicit stage equation has a direct solution.
class ImexSystem {
 public:
  virtual ~ImexSystem() = default;

  virtual std::size_t size() const = 0;
  virtual void explicit_rhs(std::span<const double> y,
                            std::span<double> out) const = 0;
  virtual void implicit_rhs(std::span<const double> y,
                            std::span<double> out) const = 0;
  /// Solves y - coeff * S(y) = rhs for y (coeff >= 0).
  virtual void solve_implicit(std::span<const double> rhs, double coeff,
                              std::span<double> y) const = 0;
};

/// One IMEX-RK step of size dt, in place.
void imex_rk_step(const ImexSystem& system, const ImexRkTableau& tableau,
                  std::vector<double>& y, double dt);

/// Advances by dt using `substeps` equal IMEX-RK steps.
void imex_rk_advance(const ImexSystem& system, const ImexRkTableau& tableau,
                     std::vector<double>& y, double dt, int substeps);

/// Default substep divisor for generating multistep starting values.
inline constexpr int kBootstrapSubsteps = 500;

}  // namespace stiff_relax
