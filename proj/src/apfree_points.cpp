#include "apfree/apfree_points.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

// Relative positions 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, 1/16, ...
class DyadicWalk {
 public:
  Rat next() {
    Rat out(num_, 1);
    out /= Rat(den_);
    num_ += 2;
    if (num_ > den_) {
      den_ *= 2;
      num_ = 1;
    }
    return out;
  }

 private:
  long num_ = 1;
  long den_ = 2;
};

// True if c is the middle or an end of a 3-term AP with two members of fixed.
bool completes_ap(const std::set<Rat>& fixed, const Rat& c) {
  for (const Rat& p : fixed) {
    if (fixed.count(midpoint(p, c))) return true;  // p, mid, c
    if (fixed.count(c + c - p)) return true;       // p, c, 2c - p
  }
  return false;
}

}  // namespace

PointConfig pick_apfree(std::span<const ClosedInterval> cells) {
  const std::size_t r = cells.size();
  if (r < 3) throw std::invalid_argument("pick_apfree: need at least three cells");
  if (!cells.front().contains(Rat(0))) throw std::invalid_argument("pick_apfree: first cell must contain 0");
  if (!cells.back().contains(Rat(1))) throw std::invalid_argument("pick_apfree: last cell must contain 1");
  for (std::size_t k = 1; k < r; ++k) {
    if (!(cells[k - 1].hi() < cells[k].lo())) {
      throw std::invalid_argument("pick_apfree: cells must be disjoint and increasing");
    }
  }
  for (std::size_t k = 1; k + 1 < r; ++k) {
    if (cells[k].degenerate()) {
      throw std::invalid_argument("pick_apfree: interior cell " + std::to_string(k + 1) +
                                  " is degenerate");
    }
  }

  std::vector<Rat> points(r);
  points.front() = Rat(0);
  points.back() = Rat(1);
  std::set<Rat> fixed{Rat(0), Rat(1)};
  for (std::size_t k = 1; k + 1 < r; ++k) {
    const ClosedInterval& cell = cells[k];
    DyadicWalk walk;
    Rat candidate;
    do {
      candidate = cell.lo() + cell.length() * walk.next();
    } while (completes_ap(fixed, candidate));
    fixed.insert(candidate);
    points[k] = std::move(candidate);
  }
  Rat d = defect(points);
  return PointConfig{std::move(points), std::move(d)};
}

Rat defect(std::span<const Rat> points) {
  const std::size_t r = points.size();
  if (r < 3) throw std::invalid_argument("defect: need at least three points");
  for (std::size_t i = 1; i < r; ++i) {
    if (!(points[i - 1] < points[i])) throw std::invalid_argument("defect: points must be strictly increasing");
  }
  // For each outer pair the best middle point is a neighbour of their
  // midpoint, found by binary search.
  std::optional<Rat> best;
  for (std::size_t m = 0; m + 2 < r; ++m) {
    for (std::size_t k = m + 2; k < r; ++k) {
      const Rat sum = points[m] + points[k];
      const Rat mid = sum / Rat(2);
      auto it = std::lower_bound(points.begin() + static_cast<long>(m) + 1,
                                 points.begin() + static_cast<long>(k), mid);
      for (auto cand : {it - 1, it}) {
        if (cand <= points.begin() + static_cast<long>(m) || cand >= points.begin() + static_cast<long>(k)) continue;
        Rat d = abs(sum - *cand - *cand);
        if (!best || d < *best) best = std::move(d);
      }
    }
  }
  if (best->is_zero()) throw ApPresentError("defect: the points contain a 3-term AP");
  return *best;
}

PointConfig stanley_points(int r) {
  if (r < 3) throw std::invalid_argument("stanley_points: r must be >= 3");
  std::vector<long> seq{0};
  std::set<long> members{0};
  for (long n = 1; static_cast<int>(seq.size()) < r; ++n) {
    bool ok = true;
    for (long a : seq) {
      // n would close a, (a + n) / 2, n.
      if ((a + n) % 2 == 0 && members.count((a + n) / 2)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      seq.push_back(n);
      members.insert(n);
    }
  }
  const long top = seq.back();
  std::vector<Rat> points;
  points.reserve(seq.size());
  for (long v : seq) points.emplace_back(v, top);
  Rat d = defect(points);
  return PointConfig{std::move(points), std::move(d)};
}

}  // namespace apfree
