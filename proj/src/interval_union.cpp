#include "apfree/interval_union.hpp"

#include <algorithm>
#include <stdexcept>

namespace apfree {

ClosedInterval::ClosedInterval(Rat lo, Rat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ < Rat(0) || hi_ > Rat(1) || lo_ > hi_) {
    throw std::invalid_argument("ClosedInterval: [" + lo_.str() + ", " + hi_.str() +
                                "] is not a subinterval of [0, 1]");
  }
}

IntervalUnion IntervalUnion::normalize(std::vector<ClosedInterval> raw) {
  std::sort(raw.begin(), raw.end(), [](const ClosedInterval& a, const ClosedInterval& b) {
    if (a.lo() != b.lo()) return a.lo() < b.lo();
    return a.hi() < b.hi();
  });
  std::vector<ClosedInterval> out;
  out.reserve(raw.size());
  for (auto& iv : raw) {
    if (!out.empty() && iv.lo() <= out.back().hi()) {
      if (iv.hi() > out.back().hi()) out.back() = ClosedInterval(out.back().lo(), iv.hi());
    } else {
      out.push_back(std::move(iv));
    }
  }
  return IntervalUnion(std::move(out));
}

Rat IntervalUnion::measure() const {
  Rat total;
  for (const auto& c : comps_) total += c.length();
  return total;
}

std::size_t IntervalUnion::first_not_below(const Rat& x) const {
  auto it = std::lower_bound(comps_.begin(), comps_.end(), x,
                             [](const ClosedInterval& c, const Rat& v) { return c.hi() < v; });
  return static_cast<std::size_t>(it - comps_.begin());
}

bool IntervalUnion::contains(const Rat& x) const {
  std::size_t i = first_not_below(x);
  return i < comps_.size() && comps_[i].lo() <= x;
}

std::optional<Rat> IntervalUnion::gap_point_in(const ClosedInterval& window) const {
  // Walk the components overlapping the window; the pieces of the window
  // between them are the open gaps.
  std::optional<Rat> best_lo, best_hi;
  Rat best_width;
  auto consider = [&](const Rat& a, const Rat& b) {
    if (!(a < b)) return;
    Rat w = b - a;
    if (!best_lo || w > best_width) {
      best_width = w;
      best_lo = a;
      best_hi = b;
    }
  };
  Rat cursor = window.lo();
  for (std::size_t i = first_not_below(window.lo()); i < comps_.size(); ++i) {
    const auto& c = comps_[i];
    if (c.lo() > window.hi()) break;
    consider(cursor, c.lo());
    if (c.hi() > cursor) cursor = c.hi();
  }
  consider(cursor, window.hi());
  if (!best_lo) return std::nullopt;
  return midpoint(*best_lo, *best_hi);
}

}  // namespace apfree
