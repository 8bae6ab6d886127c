#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {

/// The q most recent solution levels of a multistep scheme, oldest first,
/// with their time stamps. Levels must be uniformly spaced.
template <class Level>
class BdfHistory {
 public:
  explicit BdfHistory(int order) : order_(order) {
    if (order < 1) throw InvalidArgument("BdfHistory: order must be >= 1");
    levels_.reserve(static_cast<std::size_t>(order) + 1);
  }

  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return levels_.size(); }
  bool full() const noexcept { return levels_.size() == static_cast<std::size_t>(order_); }

  /// Appends a level, dropping the oldest one once q levels are held.
  void push(Level level, double t) {
    if (!times_.empty()) {
      const double step = t - times_.back();
      if (!(step > 0.0))
        throw InvalidArgument("BdfHistory: time stamps must increase");
      if (times_.size() >= 2) {
        const double spacing = times_.back() - times_[times_.size() - 2];
        if (std::abs(step - spacing) > 1e-8 * spacing)
          throw InvalidArgument("BdfHistory: levels are not uniformly spaced");
      }
    }
    levels_.push_back(std::move(level));
    times_.push_back(t);
    if (levels_.size() > static_cast<std::size_t>(order_)) {
      levels_.erase(levels_.begin());
      times_.erase(times_.begin());
    }
  }

  const Level& operator[](std::size_t i) const { return levels_[i]; }
  Level& operator[](std::size_t i) { return levels_[i]; }
  const Level& newest() const { return levels_.back(); }
  double time(std::size_t i) const { return times_[i]; }
  double newest_time() const { return times_.back(); }
  std::span<const Level> levels() const noexcept { return levels_; }

  void require_full(const char* who) const {
    if (!full()) throw ShapeMismatch(std::string(who) + ": history is not full");
  }

 private:
  int order_;
  std::vector<Level> levels_;
  std::vector<double> times_;
};

}  // namespace stiff_relax
