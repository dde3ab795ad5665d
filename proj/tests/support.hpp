#pragma once
// Builders, random instances and exhaustive grid oracles shared by the unit
// tests and the acceptance runner.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "apfree/interval_union.hpp"
#include "apfree/plh.hpp"
#include "apfree/rat.hpp"

namespace apfree::testing {

inline Rat R(const std::string& s) { return Rat::parse(s); }

inline IntervalUnion U(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  std::vector<ClosedInterval> raw;
  for (const auto& [lo, hi] : pairs) raw.emplace_back(R(lo), R(hi));
  return IntervalUnion::normalize(std::move(raw));
}

inline IntervalUnion points_union(std::initializer_list<const char*> pts) {
  std::vector<ClosedInterval> raw;
  for (const char* p : pts) raw.emplace_back(R(p), R(p));
  return IntervalUnion::normalize(std::move(raw));
}

inline PLHomeo H(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  std::vector<Breakpoint> bps;
  for (const auto& [x, y] : pairs) bps.push_back({R(x), R(y)});
  return PLHomeo(std::move(bps));
}

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

// At most max_components closed intervals with endpoint denominators <= max_denom.
inline IntervalUnion random_union(std::mt19937_64& rng, int max_components = 6, long max_denom = 64) {
  const int n = static_cast<int>(uniform(rng, 1, max_components));
  std::vector<Rat> ends;
  for (int i = 0; i < 2 * n; ++i) {
    const long q = uniform(rng, 1, max_denom);
    ends.push_back(Rat(uniform(rng, 0, q), q));
  }
  std::sort(ends.begin(), ends.end());
  std::vector<ClosedInterval> raw;
  for (int i = 0; i < n; ++i) {
    if (uniform(rng, 0, 5) == 0) {
      raw.emplace_back(ends[2 * i], ends[2 * i]);
    } else {
      raw.emplace_back(ends[2 * i], ends[2 * i + 1]);
    }
  }
  return IntervalUnion::normalize(std::move(raw));
}

// Increasing PL map with up to max_inner interior breakpoints on a 1/denom grid.
inline PLHomeo random_homeo(std::mt19937_64& rng, int max_inner = 6, long denom = 97) {
  const int n = static_cast<int>(uniform(rng, 0, max_inner));
  std::vector<long> xs, ys;
  while (static_cast<int>(xs.size()) < n) {
    long v = uniform(rng, 1, denom - 1);
    if (std::find(xs.begin(), xs.end(), v) == xs.end()) xs.push_back(v);
  }
  while (static_cast<int>(ys.size()) < n) {
    long v = uniform(rng, 1, denom - 1);
    if (std::find(ys.begin(), ys.end(), v) == ys.end()) ys.push_back(v);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  std::vector<Breakpoint> bps{{Rat(0), Rat(0)}};
  for (int i = 0; i < n; ++i) bps.push_back({Rat(xs[i], denom), Rat(ys[i], denom)});
  bps.push_back({Rat(1), Rat(1)});
  return PLHomeo(std::move(bps));
}

// Membership of t / denom in u for t = 0..denom.
inline std::vector<char> grid_members(const IntervalUnion& u, long denom) {
  std::vector<char> in(static_cast<std::size_t>(denom + 1));
  for (long t = 0; t <= denom; ++t) in[static_cast<std::size_t>(t)] = u.contains(Rat(t, denom));
  return in;
}

// Smallest integer s with s / denom >= eps (or > eps when strict).
inline long min_grid_step(const Rat& eps, long denom, bool strict) {
  const Rat scaled = eps * Rat(denom);
  long s = floor_to_long(scaled);
  if (Rat(s) < scaled || (strict && Rat(s) == scaled)) ++s;
  return std::max(1L, s);
}

// Whether some x, x + d, x + 2d lies in u on the 1/denom grid.
inline bool grid_has_ap3(const IntervalUnion& u, const Rat& eps, long denom, bool strict = false) {
  const auto in = grid_members(u, denom);
  for (long s = min_grid_step(eps, denom, strict); 2 * s <= denom; ++s) {
    for (long t = 0; t + 2 * s <= denom; ++t) {
      if (in[t] && in[t + s] && in[t + 2 * s]) return true;
    }
  }
  return false;
}

// min |a + c - 2b| * denom over grid points a < b < c of u with both gaps
// >= eps; nothing when no such triple exists.
inline std::optional<long> grid_min_defect(const IntervalUnion& u, const Rat& eps, long denom) {
  const auto in = grid_members(u, denom);
  std::vector<long> pts;
  for (long t = 0; t <= denom; ++t) {
    if (in[t]) pts.push_back(t);
  }
  const long gap = min_grid_step(eps, denom, false);
  std::optional<long> best;
  for (long a : pts) {
    for (long b : pts) {
      if (b - a < gap) continue;
      for (long c : pts) {
        if (c - b < gap) continue;
        long d = std::labs(a + c - 2 * b);
        if (!best || d < *best) best = d;
      }
    }
  }
  return best;
}

// O(n^3) defect of a sorted point list; zero when it holds an AP.
inline Rat naive_defect(const std::vector<Rat>& p) {
  std::optional<Rat> best;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      for (std::size_t k = j + 1; k < p.size(); ++k) {
        Rat d = abs(p[i] + p[k] - p[j] * Rat(2));
        if (!best || d < *best) best = d;
      }
    }
  }
  return *best;
}

// Cells in the shape destroy_step produces: [0, .], interior cells, [., 1].
inline std::vector<ClosedInterval> random_cells(std::mt19937_64& rng, int r) {
  const long denom = 64L * r;
  std::vector<ClosedInterval> cells;
  for (int k = 0; k < r; ++k) {
    const long base = 64L * k;
    long lo = base + uniform(rng, 1, 30);
    long hi = base + uniform(rng, 34, 63);
    if (k == 0) lo = 0;
    if (k == r - 1) hi = denom;
    cells.emplace_back(Rat(lo, denom), Rat(hi, denom));
  }
  return cells;
}

}  // namespace apfree::testing
