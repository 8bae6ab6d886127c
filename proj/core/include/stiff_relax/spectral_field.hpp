#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace stiff_relax {

using Complex = std::complex<double>;

/// Fourier coefficients u_k, |k| <= N, of a field on the periodic interval
/// [0, L). The wavenumber of mode k is 2*pi*k/L.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int max_mode, double period);

  int max_mode() const noexcept { return max_mode_; }
  double period() const noexcept { return period_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  Complex& operator[](int k) { return coeffs_[index(k)]; }
  const Complex& operator[](int k) const { return coeffs_[index(k)]; }

  /// Coefficients ordered k = -N..N.
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  double wavenumber(int k) const noexcept {
    return 2.0 * std::numbers::pi * k / period_;
  }

  bool same_shape(const SpectralField& other) const noexcept {
    return max_mode_ == other.max_mode_ && period_ == other.period_;
  }

  /// True when u_{-k} = conj(u_k) to `tol`, i.e. the field is real-valued.
  bool is_conjugate_symmetric(double tol = 1e-12) const;

  bool all_finite() const;

  /// Evaluates the trigonometric polynomial at x.
  Complex evaluate(double x) const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    return a += b;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    return a -= b;
  }
  friend SpectralField operator*(Complex s, SpectralField a) { return a *= s; }

 private:
  std::size_t index(int k) const noexcept {
    return static_cast<std::size_t>(k + max_mode_);
  }

  int max_mode_ = 0;
  double period_ = 2.0 * std::numbers::pi;
  std::vector<Complex> coeffs_ = std::vector<Complex>(1);
};

/// Normalized L2 distance: sqrt((1/L) * int |a - b|^2 dx), which by
/// Parseval equals the Euclidean norm of the coefficient difference.
double l2_error(const SpectralField& a, const SpectralField& b);

/// Normalized L2 norm of a single field.
double l2_norm(const SpectralField& a);

/// Uniform physical grid of M points x_j = j L / M with forward/backward
/// discrete Fourier transforms. Instances own their FFTW plans and scratch
/// buffers and must not be shared across threads while transforming.
class FourierGrid {
 public:
  FourierGrid(std::size_t points, double period);
  ~FourierGrid();
  FourierGrid(FourierGrid&&) noexcept;
  FourierGrid& operator=(FourierGrid&&) noexcept;
  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;

  std::size_t points() const noexcept;
  double period() const noexcept;
  double node(std::size_t j) const noexcept;

  /// Samples of the trigonometric polynomial on the grid.
  /// Requires points() >= 2N+1.
  std::vector<Complex> to_physical(const SpectralField& f) const;

  /// Discrete Fourier coefficients of grid samples, truncated to |k| <= N.
  SpectralField to_spectral(std::span<const Complex> samples,
                            int max_mode) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Smallest grid size used by `project` for N modes.
std::size_t projection_points(int max_mode);

/// P_N of a periodic function given in closed form, via a DFT on
/// max(points, 4N+2) equispaced samples. Throws InvalidArgument on
/// non-finite samples.
SpectralField project(const std::function<Complex(double)>& f, int max_mode,
                      double period, std::size_t points = 0);

/// P_N of uniformly spaced samples on [0, L).
SpectralField project_samples(std::span<const Complex> samples, int max_mode,
                              double period);

/// Spectral derivative d/dx.
SpectralField derivative(const SpectralField& f);

}  // namespace stiff_relax
