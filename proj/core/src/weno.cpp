#include "stiff_relax/weno.hpp"

#include <algorithm>
#include <cmath>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {

CellField::CellField(std::size_t cells, double domain_length)
    : values(cells, 0.0), length(domain_length) {
  if (cells == 0) throw InvalidArgument("CellField: zero cells");
  if (!(domain_length > 0.0)) throw InvalidArgument("CellField: length must be > 0");
}

bool CellField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double weno5_face(double a, double b, double c, double d, double e, double weno_eps) {
  const double p0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
  const double p1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
  const double p2 = (2.0 * c + 5.0 * d - e) / 6.0;

  const double s0 = 13.0 / 12.0 * (a - 2.0 * b + c) * (a - 2.0 * b + c) +
                    0.25 * (a - 4.0 * b + 3.0 * c) * (a - 4.0 * b + 3.0 * c);
  const double s1 = 13.0 / 12.0 * (b - 2.0 * c + d) * (b - 2.0 * c + d) +
                    0.25 * (b - d) * (b - d);
  const double s2 = 13.0 / 12.0 * (c - 2.0 * d + e) * (c - 2.0 * d + e) +
                    0.25 * (3.0 * c - 4.0 * d + e) * (3.0 * c - 4.0 * d + e);

  const double w0 = 0.1 / ((weno_eps + s0) * (weno_eps + s0));
  const double w1 = 0.6 / ((weno_eps + s1) * (weno_eps + s1));
  const double w2 = 0.3 / ((weno_eps + s2) * (weno_eps + s2));
  return (w0 * p0 + w1 * p1 + w2 * p2) / (w0 + w1 + w2);
}

void weno5_reconstruct(std::span<const double> avgs, Side side, std::span<double> out,
                       double weno_eps) {
  const std::size_t n = avgs.size();
  if (n < kMinWenoCells) throw InvalidArgument("weno5_reconstruct: need at least 5 cells");
  if (out.size() != n) throw ShapeMismatch("weno5_reconstruct: output size");
  auto at = [&](std::size_t i, int off) {
    return avgs[(i + n + static_cast<std::size_t>(off + 2) - 2) % n];
  };
  if (side == Side::left) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = weno5_face(at(i, -2), at(i, -1), at(i, 0), at(i, 1), at(i, 2), weno_eps);
  } else {
    // Mirror image of the left stencil about i+1/2, centred on cell i+1.
    for (std::size_t i = 0; i < n; ++i)
      out[i] = weno5_face(at(i, 3), at(i, 2), at(i, 1), at(i, 0), at(i, -1), weno_eps);
  }
}

std::vector<double> weno5_reconstruct(std::span<const double> avgs, Side side,
                                      double weno_eps) {
  std::vector<double> out(avgs.size());
  weno5_reconstruct(avgs, side, out, weno_eps);
  return out;
}

void upwind_face_flux(std::span<const double> avgs, double speed, std::span<double> out,
                      double weno_eps) {
  if (speed == 0.0) {
    if (out.size() != avgs.size()) throw ShapeMismatch("upwind_face_flux: output size");
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  weno5_reconstruct(avgs, speed > 0.0 ? Side::left : Side::right, out, weno_eps);
  for (double& f : out) f *= speed;
}

void flux_difference(std::span<const double> face_flux, double dx, std::span<double> out) {
  const std::size_t n = face_flux.size();
  if (out.size() != n) throw ShapeMismatch("flux_difference: output size");
  for (std::size_t i = 0; i < n; ++i)
    out[i] = -(face_flux[i] - face_flux[(i + n - 1) % n]) / dx;
}

std::vector<double> central_derivative6(std::span<const double> samples, double h) {
  const std::size_t n = samples.size();
  if (n < 7) throw InvalidArgument("central_derivative6: need at least 7 samples");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto at = [&](std::size_t off, bool plus) {
      return samples[plus ? (i + off) % n : (i + n - off) % n];
    };
    out[i] = (45.0 * (at(1, true) - at(1, false)) - 9.0 * (at(2, true) - at(2, false)) +
              (at(3, true) - at(3, false))) /
             (60.0 * h);
  }
  return out;
}

}  // namespace stiff_relax

namespace stiff_relax {

CellField coarsen_pairs(const CellField& fine) {
  if (fine.cells() % 2 != 0) throw ShapeMismatch("coarsen_pairs: odd cell count");
  CellField out(fine.cells() / 2, fine.length);
  for (std::size_t i = 0; i < out.cells(); ++i)
    out.values[i] = 0.5 * (fine.values[2 * i] + fine.values[2 * i + 1]);
  return out;
}

double cell_l2_distance(const CellField& a, const CellField& b) {
  if (!a.same_grid(b)) throw ShapeMismatch("cell_l2_distance: grid mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.cells(); ++i) {
    const double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return std::sqrt(sum * a.dx());
}

}  // namespace stiff_relax
