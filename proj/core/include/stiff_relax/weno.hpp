#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stiff_relax {

/// Cell averages of a periodic scalar field on a uniform grid of [0, L).
struct CellField {
  std::vector<double> values;
  double length = 1.0;

  CellField() = default;
  CellField(std::size_t cells, double domain_length);

  std::size_t cells() const noexcept { return values.size(); }
  double dx() const noexcept { return length / static_cast<double>(values.size()); }
  double center(std::size_t i) const noexcept {
    return (static_cast<double>(i) + 0.5) * dx();
  }
  bool same_grid(const CellField& other) const noexcept {
    return cells() == other.cells() && length == other.length;
  }
  bool all_finite() const;
};

/// Which neighbour of interface i+1/2 the reconstruction is biased towards.
/// `left` gives the limit from cell i, `right` the limit from cell i+1.
enum class Side { left, right };

/// Smallest grid the five-point stencils support.
inline constexpr std::size_t kMinWenoCells = 5;

inline constexpr double kDefaultWenoEpsilon = 1e-6;

/// WENO-JS fifth-order value at the right face of the centre cell of the
/// window (a, b, c, d, e).
double weno5_face(double a, double b, double c, double d, double e,
                  double weno_eps = kDefaultWenoEpsilon);

/// Interface values at i+1/2 for every cell i of a periodic grid.
/// Throws InvalidArgument when fewer than kMinWenoCells cells are given.
void weno5_reconstruct(std::span<const double> avgs, Side side, std::span<double> out,
                       double weno_eps = kDefaultWenoEpsilon);
std::vector<double> weno5_reconstruct(std::span<const double> avgs, Side side,
                                      double weno_eps = kDefaultWenoEpsilon);

/// Upwind flux speed * f at every interface i+1/2 for linear advection
/// with constant speed.
void upwind_face_flux(std::span<const double> avgs, double speed, std::span<double> out,
                      double weno_eps = kDefaultWenoEpsilon);

/// out_i = -(F_{i+1/2} - F_{i-1/2}) / dx for periodic face fluxes.
void flux_difference(std::span<const double> face_flux, double dx, std::span<double> out);

/// 6th-order central difference of periodic grid samples.
std::vector<double> central_derivative6(std::span<const double> samples, double h);

/// Cell averages of f over the cells of a uniform grid by 5-point
/// Gauss-Legendre quadrature.
template <class F>
CellField cell_averages(F&& f, std::size_t cells, double length);

}  // namespace stiff_relax

#include <array>

namespace stiff_relax {

namespace detail {
inline constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976, -0.5384693101056830910363, 0.0,
    0.5384693101056830910363, 0.9061798459386639927976};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875143, 0.4786286704993664680413, 0.5688888888888888888889,
    0.4786286704993664680413, 0.2369268850561890875143};
}  // namespace detail

template <class F>
CellField cell_averages(F&& f, std::size_t cells, double length) {
  CellField out(cells, length);
  const double h = out.dx();
  for (std::size_t i = 0; i < cells; ++i) {
    const double mid = out.center(i);
    double acc = 0.0;
    for (std::size_t g = 0; g < 5; ++g)
      acc += detail::kGaussWeights[g] * f(mid + 0.5 * h * detail::kGaussNodes[g]);
    out.values[i] = 0.5 * acc;
  }
  return out;
}

}  // namespace stiff_relax

namespace stiff_relax {

/// Restriction of a 2n-cell field to n cells by averaging neighbour pairs.
CellField coarsen_pairs(const CellField& fine);

/// Discrete L2 distance sqrt(sum (a_i - b_i)^2 dx).
double cell_l2_distance(const CellField& a, const CellField& b);

}  // namespace stiff_relax
