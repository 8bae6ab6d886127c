#pragma once

#include <stdexcept>
#include <string>

namespace stiff_relax {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested scheme order outside 1..4.
class UnsupportedOrder : public Error {
 public:
  explicit UnsupportedOrder(int q)
      : Error("unsupported IMEX-BDF order q=" + std::to_string(q) +
              " (expected 1..4)"),
        order_(q) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// Mismatched grids, mode counts or history lengths.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Vacuum or negative temperature in a moment update.
class RealizabilityError : public Error {
 public:
  using Error::Error;
};

/// Non-finite data or a violated domain precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Root bracketing or linear solve failure.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed sweep configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stiff_relax
