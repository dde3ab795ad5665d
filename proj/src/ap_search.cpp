#include "apfree/ap_search.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <tuple>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

// Contiguous run [lo, hi) of component indices; its hull is
// [comps[lo].lo, comps[hi - 1].hi].
struct Range {
  std::uint32_t lo;
  std::uint32_t hi;
  std::uint32_t size() const { return hi - lo; }
  auto tie() const { return std::tie(lo, hi); }
};

using Triple = std::array<Range, 3>;

bool triple_less(const Triple& a, const Triple& b) {
  return std::tie(a[0].lo, a[0].hi, a[1].lo, a[1].hi, a[2].lo, a[2].hi) <
         std::tie(b[0].lo, b[0].hi, b[1].lo, b[1].hi, b[2].lo, b[2].hi);
}

// Returns the first leaf triple popped in key order, i.e. the leaf with the
// smallest key (ties broken by component indices). `bound` must return a
// key that lower-bounds the keys of every leaf below the given triple, or
// nothing if no leaf below it is feasible.
template <class Key, class Bound>
std::optional<std::pair<Triple, Key>> best_first_leaf(std::size_t m, Bound bound) {
  if (m == 0) return std::nullopt;
  struct Entry {
    Key key;
    Triple t;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (b.key < a.key) return true;
    if (a.key < b.key) return false;
    return triple_less(b.t, a.t);
  };
  std::vector<Entry> heap;
  auto push = [&](const Triple& t) {
    if (t[0].lo >= t[1].hi || t[1].lo >= t[2].hi) return;  // i <= j <= k impossible
    if (auto k = bound(t)) {
      heap.push_back(Entry{std::move(*k), t});
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  };
  const Range root{0, static_cast<std::uint32_t>(m)};
  push(Triple{root, root, root});
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), worse);
    Entry e = std::move(heap.back());
    heap.pop_back();
    // Outer ranges first, the middle range last.
    int split = -1;
    std::uint32_t widest = 1;
    for (int s : {0, 2}) {
      if (e.t[s].size() > widest) {
        widest = e.t[s].size();
        split = s;
      }
    }
    if (split < 0 && e.t[1].size() > 1) split = 1;
    if (split < 0) return std::make_pair(e.t, std::move(e.key));
    const Range r = e.t[split];
    const std::uint32_t mid = r.lo + r.size() / 2;
    Triple left = e.t, right = e.t;
    left[split] = Range{r.lo, mid};
    right[split] = Range{mid, r.hi};
    push(left);
    push(right);
  }
  return std::nullopt;
}

struct HullView {
  const IntervalUnion& u;
  const Rat& lo(const Range& r) const { return u[r.lo].lo(); }
  const Rat& hi(const Range& r) const { return u[r.hi - 1].hi(); }

  // Index of the first component of r with hi >= x (r.hi if none).
  std::uint32_t first_not_below(const Range& r, const Rat& x) const {
    auto i = static_cast<std::uint32_t>(u.first_not_below(x));
    return std::clamp(i, r.lo, r.hi);
  }

  // Whether a component of r meets [a, b].
  bool meets(const Range& r, const Rat& a, const Rat& b) const {
    const std::uint32_t i = first_not_below(r, a);
    return i < r.hi && u[i].lo() <= b;
  }

  // Distance from [tl, th] to the part of r's components inside [wl, wh];
  // nothing when that part is empty.
  std::optional<Rat> distance(const Range& r, const Rat& wl, const Rat& wh, const Rat& tl,
                              const Rat& th) const {
    const std::uint32_t first = first_not_below(r, wl);
    if (first == r.hi || u[first].lo() > wh) return std::nullopt;
    if (th < wl) return std::max(u[first].lo(), wl) - th;
    if (tl > wh) {
      std::uint32_t last = first_not_below(r, wh);
      if (last == r.hi || u[last].lo() > wh) --last;
      return tl - std::min(u[last].hi(), wh);
    }
    const Rat& cl = std::max(tl, wl);
    const Rat& ch = std::min(th, wh);
    const std::uint32_t at = first_not_below(r, cl);
    if (at < r.hi && u[at].lo() <= ch) return Rat(0);
    std::optional<Rat> best;
    if (at < r.hi && u[at].lo() <= wh) best = u[at].lo() - ch;
    if (at > first) {
      Rat left = cl - u[at - 1].hi();
      if (!best || left < *best) best = std::move(left);
    }
    return best;
  }
};

// Feasible steps d for x in I, x + d in J, x + 2d in K, before the eps
// constraint: d in [lower, upper].
struct StepWindow {
  Rat lower;
  Rat upper;
};

StepWindow step_window(const Rat& ai, const Rat& bi, const Rat& aj, const Rat& bj, const Rat& ak,
                       const Rat& bk) {
  static const Rat two(2);
  StepWindow w{std::max({aj - bi, (ak - bi) / two, ak - bj}),
               std::min({bj - ai, (bk - ai) / two, bk - aj})};
  return w;
}

Rat lowest_start(const Rat& ai, const Rat& aj, const Rat& ak, const Rat& d) {
  return std::max({ai, aj - d, ak - d - d});
}

// Range of x1 + x3 - 2 x2 over x in I x J x K with both gaps >= eps, with
// the x2 values at which the extremes are attained.
struct DefectRange {
  Rat x2_lo;
  Rat x2_hi;
  Rat min_value;  // attained at x2 = x2_hi
  Rat max_value;  // attained at x2 = x2_lo
};

std::optional<DefectRange> defect_range(const Rat& ai, const Rat& bi, const Rat& aj, const Rat& bj,
                                        const Rat& ak, const Rat& bk, const Rat& eps) {
  Rat x2_lo = std::max(aj, ai + eps);
  Rat x2_hi = std::min(bj, bk - eps);
  if (x2_lo > x2_hi) return std::nullopt;
  Rat min_value = ai + std::max(ak - x2_hi - x2_hi, eps - x2_hi);
  Rat max_value = bk + std::min(bi - x2_lo - x2_lo, -eps - x2_lo);
  return DefectRange{std::move(x2_lo), std::move(x2_hi), std::move(min_value),
                     std::move(max_value)};
}

}  // namespace

std::vector<Rat> APWitness::terms() const {
  std::vector<Rat> out;
  out.reserve(static_cast<std::size_t>(length));
  Rat t = start;
  for (int i = 0; i < length; ++i) {
    out.push_back(t);
    t += step;
  }
  return out;
}

std::optional<APWitness> has_ap3(const IntervalUnion& u, const Rat& eps, bool strict) {
  if (eps.sign() <= 0) throw std::invalid_argument("has_ap3: eps must be positive");
  const HullView h{u};
  using Key = std::pair<Rat, Rat>;  // (step, start)
  auto bound = [&](const Triple& t) -> std::optional<Key> {
    const Rat &ai = h.lo(t[0]), &bi = h.hi(t[0]);
    const Rat &aj = h.lo(t[1]), &bj = h.hi(t[1]);
    const Rat &ak = h.lo(t[2]), &bk = h.hi(t[2]);
    // Cheap prune: the outer terms are at least 2 eps apart.
    const Rat two_eps = eps + eps;
    if (bk - ai < two_eps) return std::nullopt;
    StepWindow w = step_window(ai, bi, aj, bj, ak, bk);
    if (strict ? !(w.lower <= w.upper && eps < w.upper) : !(std::max(eps, w.lower) <= w.upper)) {
      return std::nullopt;
    }
    // Some middle component must meet the midpoints of admissible outer pairs.
    if (t[1].size() > 1) {
      const Rat two(2);
      Rat m_lo = (ai + std::max(ak, ai + two_eps)) / two;
      Rat m_hi = (std::min(bi, bk - two_eps) + bk) / two;
      if (!h.meets(t[1], m_lo, m_hi)) return std::nullopt;
    }
    Rat d = std::max(eps, w.lower);
    Rat x = lowest_start(ai, aj, ak, d);
    return Key{std::move(d), std::move(x)};
  };
  auto leaf = best_first_leaf<Key>(u.size(), bound);
  if (!leaf) return std::nullopt;
  const Triple& t = leaf->first;
  if (!strict || leaf->second.first > eps) {
    return APWitness{leaf->second.second, leaf->second.first, 3};
  }
  const Rat &ai = h.lo(t[0]), &aj = h.lo(t[1]), &ak = h.lo(t[2]);
  StepWindow w = step_window(ai, h.hi(t[0]), aj, h.hi(t[1]), ak, h.hi(t[2]));
  Rat d = w.lower > eps ? w.lower : midpoint(eps, w.upper);
  Rat x = lowest_start(ai, aj, ak, d);
  return APWitness{std::move(x), std::move(d), 3};
}

DefectReport min_defect(const IntervalUnion& u, const Rat& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("min_defect: eps must be positive");
  const HullView h{u};
  auto bound = [&](const Triple& t) -> std::optional<Rat> {
    auto r = defect_range(h.lo(t[0]), h.hi(t[0]), h.lo(t[1]), h.hi(t[1]), h.lo(t[2]),
                          h.hi(t[2]), eps);
    if (!r) return std::nullopt;
    Rat hull_bound = r->min_value.sign() > 0 ? r->min_value
                     : r->max_value.sign() < 0 ? -r->max_value
                                               : Rat(0);
    if (t[1].size() == 1) return hull_bound;
    // |x1 + x3 - 2 x2| is twice the distance from x2 to the outer midpoint.
    const Rat two(2);
    auto gap = h.distance(t[1], r->x2_lo, r->x2_hi, (h.lo(t[0]) + h.lo(t[2])) / two,
                          (h.hi(t[0]) + h.hi(t[2])) / two);
    if (!gap) return std::nullopt;
    return std::max(hull_bound, *gap * two);
  };
  auto leaf = best_first_leaf<Rat>(u.size(), bound);
  if (!leaf) {
    throw VacuousDefectError("min_defect: no triple has both gaps >= " + eps.str());
  }
  const Triple& t = leaf->first;
  const Rat &ai = h.lo(t[0]), &bi = h.hi(t[0]);
  const Rat &aj = h.lo(t[1]), &bj = h.hi(t[1]);
  const Rat &ak = h.lo(t[2]), &bk = h.hi(t[2]);
  auto r = defect_range(ai, bi, aj, bj, ak, bk, eps);
  if (leaf->second.is_zero()) {
    throw ApPresentError("min_defect: the set contains a 3-term AP with step >= " + eps.str());
  }
  if (r->min_value.sign() > 0) {
    Rat x3 = std::max(ak, r->x2_hi + eps);
    return DefectReport{r->min_value, {ai, r->x2_hi, std::move(x3)}};
  }
  Rat x1 = std::min(bi, r->x2_lo - eps);
  return DefectReport{-r->max_value, {std::move(x1), r->x2_lo, bk}};
}

Stability stability(const IntervalUnion& u, const Rat& eps) {
  const Rat half = eps / Rat(2);
  try {
    DefectReport rep = min_defect(u, eps);
    Rat delta = std::min(half, rep.gamma / Rat(5));
    return Stability{std::move(rep), std::move(delta)};
  } catch (const VacuousDefectError&) {
    return Stability{std::nullopt, half};
  }
}

std::optional<APWitness> ap_witness_long(const IntervalUnion& u, int n) {
  if (n < 3) throw std::invalid_argument("ap_witness_long: length must be >= 3");
  const ClosedInterval* best = nullptr;
  for (const auto& c : u.components()) {
    if (c.degenerate()) continue;
    if (!best || c.length() > best->length()) best = &c;
  }
  if (!best) return std::nullopt;
  return APWitness{best->lo(), best->length() / Rat(n - 1), n};
}

std::optional<APWitness> brute_force_ap3(const IntervalUnion& u, const Rat& eps, long denom_bound,
                                         bool strict) {
  if (denom_bound < 2) throw std::invalid_argument("brute_force_ap3: denom_bound must be >= 2");
  if (eps.sign() <= 0) throw std::invalid_argument("brute_force_ap3: eps must be positive");
  std::vector<char> in(static_cast<std::size_t>(denom_bound) + 1, 0);
  for (long t = 0; t <= denom_bound; ++t) {
    in[static_cast<std::size_t>(t)] = u.contains(Rat(t, denom_bound)) ? 1 : 0;
  }
  // Steps of grid APs are multiples of 1 / denom_bound.
  const Rat scaled = eps * Rat(denom_bound);
  long s = floor_to_long(scaled);
  if (strict || Rat(s) < scaled) ++s;
  if (s < 1) s = 1;
  for (; 2 * s <= denom_bound; ++s) {
    for (long t = 0; t + 2 * s <= denom_bound; ++t) {
      if (in[static_cast<std::size_t>(t)] && in[static_cast<std::size_t>(t + s)] &&
          in[static_cast<std::size_t>(t + 2 * s)]) {
        return APWitness{Rat(t, denom_bound), Rat(s, denom_bound), 3};
      }
    }
  }
  return std::nullopt;
}

}  // namespace apfree
