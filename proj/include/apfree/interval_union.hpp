#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "apfree/rat.hpp"

namespace apfree {

/// Closed interval [lo, hi] inside [0, 1]. Degenerate intervals (single
/// points) are allowed.
class ClosedInterval {
 public:
  /// Throws std::invalid_argument unless 0 <= lo <= hi <= 1.
  ClosedInterval(Rat lo, Rat hi);

  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  Rat length() const { return hi_ - lo_; }
  Rat center() const { return midpoint(lo_, hi_); }
  bool degenerate() const { return lo_ == hi_; }
  bool contains(const Rat& x) const { return lo_ <= x && x <= hi_; }

  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;

 private:
  Rat lo_;
  Rat hi_;
};

/// Canonical finite union of pairwise disjoint closed intervals in [0, 1],
/// sorted, with consecutive components separated by open gaps.
class IntervalUnion {
 public:
  IntervalUnion() = default;

  /// Merges overlapping and touching intervals. The result has the same
  /// point set as the input.
  static IntervalUnion normalize(std::vector<ClosedInterval> raw);

  std::span<const ClosedInterval> components() const { return comps_; }
  const ClosedInterval& operator[](std::size_t i) const { return comps_[i]; }
  std::size_t size() const { return comps_.size(); }
  bool empty() const { return comps_.empty(); }

  Rat measure() const;

  /// Binary search over the sorted components.
  bool contains(const Rat& x) const;

  /// Index of the first component with hi >= x (size() if none).
  std::size_t first_not_below(const Rat& x) const;

  /// Midpoint of the widest open gap of window \ *this (leftmost on ties),
  /// or nothing when the difference has empty interior.
  std::optional<Rat> gap_point_in(const ClosedInterval& window) const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  explicit IntervalUnion(std::vector<ClosedInterval> comps) : comps_(std::move(comps)) {}

  std::vector<ClosedInterval> comps_;
};

}  // namespace apfree
