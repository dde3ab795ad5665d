#pragma once

// Exact decision procedures for arithmetic progressions inside interval
// unions.

#include <array>
#include <optional>
#include <vector>

#include "apfree/interval_union.hpp"
#include "apfree/rat.hpp"

namespace apfree {

struct APWitness {
  Rat start;
  Rat step;
  int length = 3;

  std::vector<Rat> terms() const;
  friend bool operator==(const APWitness&, const APWitness&) = default;
};

/// gamma = min |x1 + x3 - 2 x2| over triples of the set with x2 - x1 >= eps
/// and x3 - x2 >= eps, together with a triple attaining it.
struct DefectReport {
  Rat gamma;
  std::array<Rat, 3> achiever;
  friend bool operator==(const DefectReport&, const DefectReport&) = default;
};

/// Searches for x, x + d, x + 2d in u with d >= eps (d > eps when strict).
///
/// Each ordered triple of components (i <= j <= k) is a two-variable
/// linear system in (x, d); eliminating x leaves an interval of feasible
/// steps. Triples are explored best-first over a balanced hierarchy of
/// component ranges, bounding each range triple by its hulls, so the result
/// is the lexicographically smallest feasible (d, x) vertex. In strict mode
/// the infimum d = eps may be unattained; the returned step is then the
/// midpoint between eps and the triple's largest feasible step.
///
/// Throws std::invalid_argument unless eps > 0.
std::optional<APWitness> has_ap3(const IntervalUnion& u, const Rat& eps, bool strict = false);

/// Exact minimum defect over the gap-constrained triples of u.
/// Throws ApPresentError if some triple has defect 0 and
/// VacuousDefectError if no triple satisfies the gap constraints.
DefectReport min_defect(const IntervalUnion& u, const Rat& eps);

struct Stability {
  std::optional<DefectReport> defect;  // empty when the triple set is vacuous
  Rat delta;                           // min(eps / 2, gamma / 5)
};

/// Radius below which perturbing the map that produced u cannot create APs
/// of step exceeding 2 eps. A vacuous triple set yields eps / 2.
Stability stability(const IntervalUnion& u, const Rat& eps);

inline Rat stability_radius(const IntervalUnion& u, const Rat& eps) {
  return stability(u, eps).delta;
}

/// n-term AP spanning the widest positive-length component (leftmost on
/// ties). Nothing iff u has measure zero. Throws unless n >= 3.
std::optional<APWitness> ap_witness_long(const IntervalUnion& u, int n);

/// Exhaustive search over grid points t / denom_bound in u. Returns the
/// lexicographically smallest (d, x) grid witness. Throws unless
/// denom_bound >= 2 and eps > 0.
std::optional<APWitness> brute_force_ap3(const IntervalUnion& u, const Rat& eps, long denom_bound,
                                         bool strict = false);

}  // namespace apfree
