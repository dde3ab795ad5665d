#pragma once

// Finite point sets in [0, 1] free of 3-term arithmetic progressions.

#include <span>
#include <vector>

#include "apfree/interval_union.hpp"
#include "apfree/rat.hpp"

namespace apfree {

struct PointConfig {
  std::vector<Rat> points;  // strictly increasing, first 0, last 1
  Rat defect;               // min |p_m + p_k - 2 p_n| over m < n < k
  friend bool operator==(const PointConfig&, const PointConfig&) = default;
};

/// Fixes p_1 = 0 and p_r = 1, then picks one point in the interior of each
/// interior cell, in order, walking the dyadic relative positions
/// 1/2, 1/4, 3/4, 1/8, ... until the candidate completes no 3-term AP with
/// the points already fixed.
///
/// Throws std::invalid_argument unless there are at least three cells,
/// pairwise disjoint and increasing, with 0 in the first, 1 in the last and
/// every interior cell non-degenerate.
PointConfig pick_apfree(std::span<const ClosedInterval> cells);

/// Exact minimum of |p_m + p_k - 2 p_n| over m < n < k. Throws
/// std::invalid_argument if the points are not strictly increasing or
/// fewer than three, and ApPresentError if the minimum is zero.
Rat defect(std::span<const Rat> points);

/// First r terms of the greedy AP-free sequence 0, 1, 3, 4, 9, 10, ...
/// divided by the r-th term. Throws unless r >= 3.
PointConfig stanley_points(int r);

}  // namespace apfree
