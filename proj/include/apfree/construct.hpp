#pragma once

// Destroying arithmetic progressions in images of nowhere-dense sets by
// piecewise-linear homeomorphisms, with certified finite-stage schedules.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apfree/ap_search.hpp"
#include "apfree/apfree_points.hpp"
#include "apfree/interval_union.hpp"
#include "apfree/nd_gen.hpp"
#include "apfree/plh.hpp"
#include "apfree/rat.hpp"

namespace apfree {

/// Geometry of one destruction step. [0, 1] is split into r pieces
/// X_k = (x_{k-1}, x_k) by cuts x_k near k / r that avoid the image; only
/// the pieces that receive a cell are recorded.
struct PartitionPlan {
  mpz_class r = 0;                              // number of pieces, r * eps > 1
  std::vector<mpz_class> cell_pieces;           // 1-based piece index of each cell
  std::vector<std::pair<Rat, Rat>> piece_cuts;  // (x_{k-1}, x_k) of each cell's piece
  std::vector<ClosedInterval> cells;            // closed cells Y covering the image
  PointConfig anchors;                          // one AP-free anchor per cell
  std::vector<ClosedInterval> targets;          // Z around each anchor, shorter than defect / 4
  PLHomeo contraction;                          // maps each cell affinely onto its target

  bool is_identity() const { return cells.empty(); }
};

struct StageCertificate {
  int stage = 0;
  Rat eps_requested;
  Rat eps_effective;
  int cover_generation = 0;
  std::optional<Rat> gamma;  // empty when the gap-constrained triple set is vacuous
  Rat delta_stability;
  Rat perturbation_used;
  bool verified = false;
  friend bool operator==(const StageCertificate&, const StageCertificate&) = default;
};

struct DestroyOptions {
  // Give every piece X_k a cell and an anchor, occupied or not. The number
  // of anchors then grows like 1 / eps, which is only practical for a
  // single coarse step.
  bool anchor_empty_cells = false;
};

struct DestroyResult {
  PLHomeo homeo;            // g = contraction ∘ f
  PartitionPlan plan;
  StageCertificate stage;   // stage index 0; gamma and delta for g's image
};

/// Returns g with sup_dist(g, f) < eps whose image of gen's cover (at the
/// recorded generation) has no 3-term AP of step >= eps.
///
/// Throws std::invalid_argument unless 0 < eps < 1/2, RefinementExhausted
/// if no generation up to max_gen leaves gaps in every cut window, and
/// VerificationFailed if the result misses its own postconditions.
DestroyResult destroy_step(const PLHomeo& f, const NDGenerator& gen, const Rat& eps, int max_gen,
                           const DestroyOptions& options = {});

/// phi(cover(g)) has no 3-term AP of step >= eps.
bool in_H_eps(const PLHomeo& phi, const NDGenerator& gen, int g, const Rat& eps);

struct Guarantee {
  int stage = 0;
  int generator_count = 0;  // the guarantee is about U = gens[0] ∪ ... ∪ gens[count - 1]
  Rat step_bound;
  bool strict = true;       // no AP with step > bound (strict) or >= bound
  friend bool operator==(const Guarantee&, const Guarantee&) = default;
};

inline constexpr const char* kCertificateSchema = "apfree.fap-certificate/1";

struct FapCertificate {
  std::string schema = kCertificateSchema;
  std::vector<std::string> generators;  // descriptions, for matching at verification
  int max_gen = 0;
  std::uint64_t seed = 0;
  std::vector<StageCertificate> stages;
  std::vector<PLHomeo> stage_homeos;    // phi after each stage
  PLHomeo final_homeo;
  std::vector<Guarantee> guarantees;
  std::vector<Rat> budget_ledger;       // delta_k minus the steps of all later stages
  friend bool operator==(const FapCertificate&, const FapCertificate&) = default;
};

struct BuildOptions {
  Rat min_eps = Rat::inv_pow2(40);
  std::uint64_t seed = 0;
  DestroyOptions destroy;
};

/// Default requested step of stage k (1-based): 2^-(k+1).
Rat default_stage_eps(int k);

/// Runs `stages` destruction steps over the nested unions of gens. Stage k
/// uses step eps'_k = min(requested_k, min_{j<k} delta_j * 2^-(k-j+1)), so
/// the steps of all stages after j sum to less than delta_j / 2.
///
/// eps_schedule may be empty (defaults) or hold one entry per stage, each
/// in (0, 1/2). Throws std::invalid_argument on bad arguments,
/// ScheduleInfeasible if a step falls below options.min_eps, and propagates
/// RefinementExhausted.
FapCertificate build_fap(const std::vector<NDGenerator>& gens, int stages,
                         const std::vector<Rat>& eps_schedule, int max_gen,
                         const BuildOptions& options = {});

struct VerifyReport {
  bool ok = true;
  std::string check;   // name of the first failing check
  std::string detail;
};

/// Replays every recorded quantity of a certificate against gens.
VerifyReport verify_certificate(const FapCertificate& cert, const std::vector<NDGenerator>& gens);

/// n-term AP inside phi(u). Throws std::invalid_argument if u has measure
/// zero or n < 3.
APWitness rap_demo(const IntervalUnion& u, const PLHomeo& phi, int n);

}  // namespace apfree
