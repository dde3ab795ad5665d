#include "apfree/plh.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace apfree {

namespace {

bool collinear(const Breakpoint& a, const Breakpoint& b, const Breakpoint& c) {
  return (b.y - a.y) * (c.x - b.x) == (c.y - b.y) * (b.x - a.x);
}

std::vector<Breakpoint> drop_collinear(std::vector<Breakpoint> in) {
  if (in.size() <= 2) return in;
  std::vector<Breakpoint> out;
  out.reserve(in.size());
  out.push_back(std::move(in[0]));
  for (std::size_t i = 1; i + 1 < in.size(); ++i) {
    if (!collinear(out.back(), in[i], in[i + 1])) out.push_back(std::move(in[i]));
  }
  out.push_back(std::move(in.back()));
  return out;
}

Rat lerp(const Breakpoint& a, const Breakpoint& b, const Rat& x) {
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

}  // namespace

PLHomeo::PLHomeo() : bps_{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}} {}

PLHomeo::PLHomeo(std::vector<Breakpoint> breakpoints, Trusted)
    : bps_(drop_collinear(std::move(breakpoints))) {}

PLHomeo::PLHomeo(std::vector<Breakpoint> breakpoints) {
  if (breakpoints.size() < 2) throw std::invalid_argument("PLHomeo: need at least two breakpoints");
  if (breakpoints.front() != Breakpoint{Rat(0), Rat(0)} ||
      breakpoints.back() != Breakpoint{Rat(1), Rat(1)}) {
    throw std::invalid_argument("PLHomeo: must start at (0,0) and end at (1,1)");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i - 1].x < breakpoints[i].x) || !(breakpoints[i - 1].y < breakpoints[i].y)) {
      throw std::invalid_argument("PLHomeo: breakpoints must be strictly increasing in x and y");
    }
  }
  bps_ = drop_collinear(std::move(breakpoints));
}

Rat PLHomeo::eval(const Rat& x) const {
  if (x < Rat(0) || x > Rat(1)) throw std::invalid_argument("PLHomeo::eval: x outside [0, 1]");
  auto it = std::lower_bound(bps_.begin(), bps_.end(), x,
                             [](const Breakpoint& b, const Rat& v) { return b.x < v; });
  if (it->x == x) return it->y;
  return lerp(*(it - 1), *it, x);
}

Rat PLHomeo::eval_inverse(const Rat& y) const {
  if (y < Rat(0) || y > Rat(1)) throw std::invalid_argument("PLHomeo::eval_inverse: y outside [0, 1]");
  auto it = std::lower_bound(bps_.begin(), bps_.end(), y,
                             [](const Breakpoint& b, const Rat& v) { return b.y < v; });
  if (it->y == y) return it->x;
  const auto& a = *(it - 1);
  const auto& b = *it;
  return a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y);
}

PLHomeo PLHomeo::inverse() const {
  std::vector<Breakpoint> swapped;
  swapped.reserve(bps_.size());
  for (const auto& b : bps_) swapped.push_back({b.y, b.x});
  return PLHomeo(std::move(swapped), Trusted{});
}

PLHomeo compose(const PLHomeo& outer, const PLHomeo& inner) {
  std::vector<Rat> xs;
  xs.reserve(outer.size() + inner.size());
  for (const auto& b : inner.breakpoints()) xs.push_back(b.x);
  for (const auto& b : outer.breakpoints()) xs.push_back(inner.eval_inverse(b.x));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Breakpoint> out;
  out.reserve(xs.size());
  for (auto& x : xs) {
    Rat y = outer.eval(inner.eval(x));
    out.push_back({std::move(x), std::move(y)});
  }
  return PLHomeo(std::move(out));
}

Rat sup_dist(const PLHomeo& phi, const PLHomeo& psi) {
  Rat best;
  auto check = [&](const Rat& x) {
    Rat d = abs(phi.eval(x) - psi.eval(x));
    if (d > best) best = std::move(d);
  };
  for (const auto& b : phi.breakpoints()) check(b.x);
  for (const auto& b : psi.breakpoints()) check(b.x);
  return best;
}

IntervalUnion image(const PLHomeo& phi, const IntervalUnion& u) {
  std::vector<ClosedInterval> out;
  out.reserve(u.size());
  for (const auto& c : u.components()) out.emplace_back(phi.eval(c.lo()), phi.eval(c.hi()));
  return IntervalUnion::normalize(std::move(out));
}

PLHomeo perturb(const PLHomeo& phi, const Rat& bound, std::uint64_t seed) {
  if (bound.sign() <= 0) throw std::invalid_argument("perturb: bound must be positive");
  std::mt19937_64 rng(seed);

  // Insert one to three extra breakpoints at dyadic positions so that maps
  // without interior breakpoints (the identity) can still move.
  std::vector<Breakpoint> pts(phi.breakpoints().begin(), phi.breakpoints().end());
  const unsigned extra = 1 + static_cast<unsigned>(rng() % 3);
  for (unsigned e = 0; e < extra; ++e) {
    Rat x(static_cast<long>(1 + rng() % 1023), 1024);
    auto it = std::lower_bound(pts.begin(), pts.end(), x,
                               [](const Breakpoint& b, const Rat& v) { return b.x < v; });
    if (it->x == x) continue;
    Rat y = phi.eval(x);
    pts.insert(it, Breakpoint{std::move(x), std::move(y)});
  }

  // Each interior y moves by less than a third of the distance to either
  // neighbour (original values), so strict monotonicity survives, and by
  // less than bound / 2.
  const Rat half_bound = bound / Rat(2);
  std::vector<Rat> offsets(pts.size());
  bool moved = false;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    Rat margin = std::min({half_bound, (pts[i].y - pts[i - 1].y) / Rat(3),
                           (pts[i + 1].y - pts[i].y) / Rat(3)});
    long k = static_cast<long>(rng() % 2047) - 1023;
    if (k != 0) moved = true;
    offsets[i] = margin * Rat(k, 1024);
  }
  if (!moved) {
    const std::size_t i = 1;
    Rat margin = std::min({half_bound, (pts[i].y - pts[i - 1].y) / Rat(3),
                           (pts[i + 1].y - pts[i].y) / Rat(3)});
    offsets[i] = margin / Rat(2);
  }
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) pts[i].y += offsets[i];
  return PLHomeo(std::move(pts));
}

}  // namespace apfree
