#pragma once

// Nowhere-dense compact subsets of [0, 1], presented by refining covers.

#include <memory>
#include <string>
#include <vector>

#include "apfree/interval_union.hpp"
#include "apfree/rat.hpp"

namespace apfree {

/// Covers above this many components are refused with RefinementExhausted.
inline constexpr std::size_t kMaxCoverComponents = std::size_t{1} << 22;

/// A nowhere-dense compact set C presented by closed covers
/// cover(0) ⊇ cover(1) ⊇ ... ⊇ C. Copies share one memo of generated covers;
/// the memo is mutex-guarded, so a generator may be used from several threads.
class NDGenerator {
 public:
  enum class Kind { Cantor, Points, Union };

  /// Cantor-type set: every component keeps its two outer pieces of relative
  /// length (1 - removed) / 2 and loses the open middle of relative length
  /// `removed`. cantor(1/3) is the middle-thirds set. Throws unless
  /// 0 < removed < 1.
  static NDGenerator cantor(Rat removed);

  /// A finite set; its covers are its points. Throws if a value is outside
  /// [0, 1] or the list is empty.
  static NDGenerator points(std::vector<Rat> values);

  /// Finite union. Throws if children is empty.
  static NDGenerator union_of(std::vector<NDGenerator> children);

  Kind kind() const;
  const Rat& ratio() const;                        // Cantor only
  const std::vector<Rat>& values() const;          // Points only
  const std::vector<NDGenerator>& children() const;  // Union only

  /// Cover at generation g (memoized). Nested in g.
  const IntervalUnion& cover(int g) const;

  /// Every closed subinterval of [0, 1] at least this long contains a point
  /// outside cover(g). Strictly decreasing to 0 in g.
  Rat gap_scale(int g) const;

  std::string describe() const;

 private:
  struct Node;
  explicit NDGenerator(std::shared_ptr<Node> node) : node_(std::move(node)) {}
  std::shared_ptr<Node> node_;
};

/// Smallest g <= max_gen with gap_scale(g) <= window_len. Throws
/// RefinementExhausted if there is none, std::invalid_argument unless
/// window_len > 0.
int refine_until(const NDGenerator& gen, const Rat& window_len, int max_gen);

/// U_k = gens[0] ∪ ... ∪ gens[k - 1] (the generator itself when k == 1).
NDGenerator nested_union(const std::vector<NDGenerator>& gens, std::size_t k);

}  // namespace apfree
