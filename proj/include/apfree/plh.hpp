#pragma once

// Increasing piecewise-linear homeomorphisms of [0, 1] with rational
// breakpoints.

#include <cstdint>
#include <span>
#include <vector>

#include "apfree/interval_union.hpp"
#include "apfree/rat.hpp"

namespace apfree {

struct Breakpoint {
  Rat x;
  Rat y;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

class PLHomeo {
 public:
  /// The identity map.
  PLHomeo();

  /// Validates (starts at (0,0), ends at (1,1), strictly increasing in both
  /// coordinates) and drops the middle point of every collinear triple.
  /// Throws std::invalid_argument on violation.
  explicit PLHomeo(std::vector<Breakpoint> breakpoints);

  static PLHomeo identity() { return PLHomeo(); }

  std::span<const Breakpoint> breakpoints() const { return bps_; }
  std::size_t size() const { return bps_.size(); }

  /// Throws std::invalid_argument for x outside [0, 1].
  Rat eval(const Rat& x) const;
  Rat operator()(const Rat& x) const { return eval(x); }

  /// Preimage of y in [0, 1].
  Rat eval_inverse(const Rat& y) const;

  PLHomeo inverse() const;

  friend bool operator==(const PLHomeo&, const PLHomeo&) = default;

 private:
  struct Trusted {};
  PLHomeo(std::vector<Breakpoint> breakpoints, Trusted);

  std::vector<Breakpoint> bps_;
};

/// x -> outer(inner(x)).
PLHomeo compose(const PLHomeo& outer, const PLHomeo& inner);

inline PLHomeo invert(const PLHomeo& phi) { return phi.inverse(); }

/// Exact max_x |phi(x) - psi(x)|, attained at a breakpoint of either map.
Rat sup_dist(const PLHomeo& phi, const PLHomeo& psi);

/// phi(U), component by component.
IntervalUnion image(const PLHomeo& phi, const IntervalUnion& u);

/// A deterministic perturbation psi of phi with 0 < sup_dist(psi, phi) < bound.
/// Throws std::invalid_argument unless bound > 0.
PLHomeo perturb(const PLHomeo& phi, const Rat& bound, std::uint64_t seed);

}  // namespace apfree
