#include "stiff_relax/spectral_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralField::SpectralField(int max_mode, double period)
    : max_mode_(max_mode),
      period_(period),
      coeffs_(static_cast<std::size_t>(2 * max_mode + 1)) {
  if (max_mode < 0) throw InvalidArgument("SpectralField: negative mode count");
  if (!(period > 0.0)) throw InvalidArgument("SpectralField: period must be > 0");
}

bool SpectralField::is_conjugate_symmetric(double tol) const {
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  for (int k = 0; k <= max_mode_; ++k) {
    if (std::abs((*this)[-k] - std::conj((*this)[k])) > tol * std::max(scale, 1.0))
      return false;
  }
  return true;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

Complex SpectralField::evaluate(double x) const {
  Complex sum = 0.0;
  for (int k = -max_mode_; k <= max_mode_; ++k)
    sum += (*this)[k] * std::polar(1.0, wavenumber(k) * x);
  return sum;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!same_shape(other)) throw ShapeMismatch("SpectralField: shape mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!same_shape(other)) throw ShapeMismatch("SpectralField: shape mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

double l2_norm(const SpectralField& a) {
  double sum = 0.0;
  for (const auto& c : a.coeffs()) sum += std::norm(c);
  return std::sqrt(sum);
}

double l2_error(const SpectralField& a, const SpectralField& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("l2_error: shape mismatch");
  double sum = 0.0;
  auto ca = a.coeffs();
  auto cb = b.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i) sum += std::norm(ca[i] - cb[i]);
  return std::sqrt(sum);
}

struct FourierGrid::Impl {
  std::size_t points;
  double period;
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Impl(std::size_t m, double l) : points(m), period(l) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(m);
    const int n = static_cast<int>(m);
    forward = fftw_plan_dft_1d(n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(n, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;

  Complex* data() { return reinterpret_cast<Complex*>(buffer); }
};

FourierGrid::FourierGrid(std::size_t points, double period) {
  if (points == 0) throw InvalidArgument("FourierGrid: zero points");
  if (!(period > 0.0)) throw InvalidArgument("FourierGrid: period must be > 0");
  impl_ = std::make_unique<Impl>(points, period);
}

FourierGrid::~FourierGrid() = default;
FourierGrid::FourierGrid(FourierGrid&&) noexcept = default;
FourierGrid& FourierGrid::operator=(FourierGrid&&) noexcept = default;

std::size_t FourierGrid::points() const noexcept { return impl_->points; }
double FourierGrid::period() const noexcept { return impl_->period; }
double FourierGrid::node(std::size_t j) const noexcept {
  return impl_->period * static_cast<double>(j) / static_cast<double>(impl_->points);
}

std::vector<Complex> FourierGrid::to_physical(const SpectralField& f) const {
  const std::size_t m = impl_->points;
  const int n = f.max_mode();
  if (m < static_cast<std::size_t>(2 * n + 1))
    throw ShapeMismatch("FourierGrid::to_physical: grid too coarse for N");
  Complex* buf = impl_->data();
  std::fill(buf, buf + m, Complex(0.0));
  for (int k = -n; k <= n; ++k) {
    const std::size_t slot = k >= 0 ? static_cast<std::size_t>(k)
                                    : m - static_cast<std::size_t>(-k);
    buf[slot] = f[k];
  }
  fftw_execute(impl_->backward);
  return {buf, buf + m};
}

SpectralField FourierGrid::to_spectral(std::span<const Complex> samples,
                                       int max_mode) const {
  const std::size_t m = impl_->points;
  if (samples.size() != m) throw ShapeMismatch("FourierGrid::to_spectral: sample count");
  if (m < static_cast<std::size_t>(2 * max_mode + 1))
    throw ShapeMismatch("FourierGrid::to_spectral: grid too coarse for N");
  Complex* buf = impl_->data();
  std::copy(samples.begin(), samples.end(), buf);
  fftw_execute(impl_->forward);
  SpectralField out(max_mode, impl_->period);
  const double inv = 1.0 / static_cast<double>(m);
  for (int k = -max_mode; k <= max_mode; ++k) {
    const std::size_t slot = k >= 0 ? static_cast<std::size_t>(k)
                                    : m - static_cast<std::size_t>(-k);
    out[k] = buf[slot] * inv;
  }
  return out;
}

std::size_t projection_points(int max_mode) {
  return static_cast<std::size_t>(4 * max_mode + 2);
}

SpectralField project(const std::function<Complex(double)>& f, int max_mode,
                      double period, std::size_t points) {
  const std::size_t m = std::max(points, projection_points(max_mode));
  std::vector<Complex> samples(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = period * static_cast<double>(j) / static_cast<double>(m);
    samples[j] = f(x);
    if (!std::isfinite(samples[j].real()) || !std::isfinite(samples[j].imag()))
      throw InvalidArgument("project: non-finite sample");
  }
  return FourierGrid(m, period).to_spectral(samples, max_mode);
}

SpectralField project_samples(std::span<const Complex> samples, int max_mode,
                              double period) {
  for (const auto& s : samples)
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw InvalidArgument("project_samples: non-finite sample");
  return FourierGrid(samples.size(), period).to_spectral(samples, max_mode);
}

SpectralField derivative(const SpectralField& f) {
  SpectralField out(f.max_mode(), f.period());
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k)
    out[k] = Complex(0.0, f.wavenumber(k)) * f[k];
  return out;
}

}  // namespace stiff_relax
