#include "apfree/construct.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

constexpr long kMaxDensePieces = 1L << 16;

// r = max(3, ceil(2 / eps)) pieces; cut k lies in the window of half-width
// 1 / (4r) around k / r, so pieces are at most 3 / (2r) < eps long and the
// windows are pairwise disjoint.
struct Grid {
  mpz_class r;
  Rat width;  // window half-width

  explicit Grid(const Rat& eps) : r(std::max(mpz_class(3), ceil_int(Rat(2) / eps))) {
    width = Rat(1) / (Rat(mpq_class(r)) * Rat(4));
  }

  Rat centre(const mpz_class& k) const { return Rat(mpq_class(k, r)); }
  ClosedInterval window(const mpz_class& k) const {
    Rat c = centre(k);
    return ClosedInterval(c - width, c + width);
  }
  Rat scaled(const Rat& x) const { return x * Rat(mpq_class(r)); }
};

// Every window meeting the image must contain a gap. A component longer
// than 3 / (2r) swallows a whole window.
bool windows_have_gaps(const IntervalUnion& img, const Grid& grid) {
  const Rat too_long = grid.width * Rat(6);
  mpz_class last = 0;
  for (const auto& c : img.components()) {
    if (c.length() >= too_long) return false;
    mpz_class k = std::max(mpz_class(1), ceil_int(grid.scaled(c.lo() - grid.width)));
    if (k <= last) k = last + 1;
    const mpz_class k_end = std::min(mpz_class(grid.r - 1), floor_int(grid.scaled(c.hi() + grid.width)));
    for (; k <= k_end; ++k) {
      if (!img.gap_point_in(grid.window(k))) return false;
      last = k;
    }
  }
  return true;
}

struct GenerationChoice {
  int generation;
  IntervalUnion image;
};

GenerationChoice choose_generation(const PLHomeo& f, const NDGenerator& gen, const Grid& grid,
                                   int max_gen) {
  for (int g = 0; g <= max_gen; ++g) {
    IntervalUnion img = image(f, gen.cover(g));
    if (windows_have_gaps(img, grid)) return GenerationChoice{g, std::move(img)};
  }
  throw RefinementExhausted("refinement exhausted: no generation <= " + std::to_string(max_gen) +
                            " of " + gen.describe() + " leaves a gap in every cut window");
}

class Cuts {
 public:
  Cuts(const IntervalUnion& img, const Grid& grid) : img_(img), grid_(grid) {}

  const Rat& at(const mpz_class& k) {
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    Rat x;
    if (k == 0) {
      x = Rat(0);
    } else if (k == grid_.r) {
      x = Rat(1);
    } else {
      x = *img_.gap_point_in(grid_.window(k));
    }
    return memo_.emplace(k, std::move(x)).first->second;
  }

  // 1-based index of the piece holding x, for x off every cut.
  mpz_class piece_of(const Rat& x) {
    mpz_class below = ceil_int(grid_.scaled(x - grid_.width)) - 1;
    below = std::clamp(below, mpz_class(0), mpz_class(grid_.r - 1));
    mpz_class k = below + 1;
    for (; k < grid_.r && grid_.centre(k) - grid_.width < x; ++k) {
      if (!(at(k) < x)) break;
    }
    return k;
  }

 private:
  const IntervalUnion& img_;
  const Grid& grid_;
  std::map<mpz_class, Rat> memo_;
};

// Target of length t around the anchor, clipped into the cell; the end
// targets start at 0 and end at 1.
ClosedInterval target_for(const ClosedInterval& cell, const Rat& anchor, const Rat& t, bool first,
                          bool last) {
  if (first) return ClosedInterval(Rat(0), t);
  if (last) return ClosedInterval(Rat(1) - t, Rat(1));
  const Rat half = t / Rat(2);
  return ClosedInterval(std::max(cell.lo(), anchor - half), std::min(cell.hi(), anchor + half));
}

}  // namespace

DestroyResult destroy_step(const PLHomeo& f, const NDGenerator& gen, const Rat& eps, int max_gen,
                           const DestroyOptions& options) {
  if (eps.sign() <= 0 || eps >= Rat(1, 2)) {
    throw std::invalid_argument("destroy_step: eps " + eps.str() + " not in (0, 1/2)");
  }
  const Grid grid(eps);
  if (options.anchor_empty_cells && grid.r > kMaxDensePieces) {
    throw std::invalid_argument("destroy_step: " + grid.r.get_str() + " pieces are too many to anchor");
  }
  GenerationChoice choice = choose_generation(f, gen, grid, max_gen);
  const IntervalUnion& img = choice.image;

  DestroyResult out{f, PartitionPlan{}, StageCertificate{}};
  out.stage.eps_requested = eps;
  out.stage.eps_effective = eps;
  out.stage.cover_generation = choice.generation;

  if (!has_ap3(img, eps)) {
    Stability st = stability(img, eps);
    out.stage.gamma = st.defect ? std::optional<Rat>(st.defect->gamma) : std::nullopt;
    out.stage.delta_stability = st.delta;
    out.stage.verified = true;
    return out;
  }

  PartitionPlan& plan = out.plan;
  plan.r = grid.r;
  Cuts cuts(img, grid);

  // Components of each occupied piece, in order; no component straddles a cut.
  std::map<mpz_class, std::pair<std::size_t, std::size_t>> occupied;
  for (std::size_t i = 0; i < img.size(); ++i) {
    auto [it, fresh] = occupied.try_emplace(cuts.piece_of(img[i].lo()), i, i + 1);
    if (!fresh) it->second.second = i + 1;
  }
  std::vector<mpz_class> pieces;
  if (options.anchor_empty_cells) {
    for (mpz_class k = 1; k <= grid.r; ++k) pieces.push_back(k);
  } else {
    pieces.push_back(1);
    for (const auto& [k, range] : occupied) {
      if (k != 1 && k != grid.r) pieces.push_back(k);
    }
    pieces.push_back(grid.r);
  }

  for (const auto& k : pieces) {
    const Rat left = cuts.at(k - 1);
    const Rat right = cuts.at(k);
    const bool first = k == 1;
    const bool last = k == grid.r;
    auto hit = occupied.find(k);
    Rat lo, hi;
    if (hit != occupied.end()) {
      const Rat& hull_lo = img[hit->second.first].lo();
      const Rat& hull_hi = img[hit->second.second - 1].hi();
      lo = first ? Rat(0) : hull_lo - (hull_lo - left) / Rat(2);
      hi = last ? Rat(1) : hull_hi + (right - hull_hi) / Rat(2);
    } else {
      const Rat quarter = (right - left) / Rat(4);
      const Rat centre = midpoint(left, right);
      lo = first ? Rat(0) : centre - quarter;
      hi = last ? Rat(1) : centre + quarter;
      if (first) hi = right / Rat(2);
      if (last) lo = midpoint(left, Rat(1));
    }
    plan.cell_pieces.push_back(k);
    plan.piece_cuts.emplace_back(left, right);
    plan.cells.emplace_back(std::move(lo), std::move(hi));
  }

  plan.anchors = pick_apfree(plan.cells);
  const Rat eighth_defect = plan.anchors.defect / Rat(8);
  const std::size_t ncells = plan.cells.size();
  std::vector<Breakpoint> bps;
  bps.reserve(2 * ncells);
  for (std::size_t c = 0; c < ncells; ++c) {
    const ClosedInterval& cell = plan.cells[c];
    Rat t = std::min(eighth_defect, cell.length() / Rat(2));
    plan.targets.push_back(target_for(cell, plan.anchors.points[c], t, c == 0, c + 1 == ncells));
    const ClosedInterval& z = plan.targets.back();
    bps.push_back({cell.lo(), z.lo()});
    bps.push_back({cell.hi(), z.hi()});
  }
  plan.contraction = PLHomeo(std::move(bps));

  out.homeo = compose(plan.contraction, f);
  const Rat moved = sup_dist(out.homeo, f);
  const Rat contraction_moved = sup_dist(plan.contraction, PLHomeo::identity());
  if (!(moved < eps) || !(contraction_moved < eps) || moved != contraction_moved) {
    throw VerificationFailed("destroy_step: perturbation " + moved.str() + " not below eps " + eps.str());
  }
  IntervalUnion new_img = image(plan.contraction, img);
  if (auto ap = has_ap3(new_img, eps)) {
    throw VerificationFailed("destroy_step: image still has an AP with start " + ap->start.str() +
                             " and step " + ap->step.str());
  }
  Stability st = stability(new_img, eps);
  out.stage.gamma = st.defect ? std::optional<Rat>(st.defect->gamma) : std::nullopt;
  out.stage.delta_stability = st.delta;
  out.stage.perturbation_used = moved;
  out.stage.verified = true;
  return out;
}

bool in_H_eps(const PLHomeo& phi, const NDGenerator& gen, int g, const Rat& eps) {
  return !has_ap3(image(phi, gen.cover(g)), eps);
}

Rat default_stage_eps(int k) { return Rat::inv_pow2(static_cast<unsigned>(k + 1)); }

FapCertificate build_fap(const std::vector<NDGenerator>& gens, int stages,
                         const std::vector<Rat>& eps_schedule, int max_gen,
                         const BuildOptions& options) {
  if (gens.empty()) throw std::invalid_argument("build_fap: no generators");
  if (stages < 1) throw std::invalid_argument("build_fap: stages must be >= 1");
  if (max_gen < 1) throw std::invalid_argument("build_fap: max_gen must be >= 1");
  if (!eps_schedule.empty() && eps_schedule.size() != static_cast<std::size_t>(stages)) {
    throw std::invalid_argument("build_fap: eps schedule needs one entry per stage");
  }
  for (const auto& e : eps_schedule) {
    if (e.sign() <= 0 || e >= Rat(1, 2)) {
      throw std::invalid_argument("build_fap: schedule entry " + e.str() + " not in (0, 1/2)");
    }
  }

  FapCertificate cert;
  for (const auto& g : gens) cert.generators.push_back(g.describe());
  cert.max_gen = max_gen;
  cert.seed = options.seed;

  PLHomeo phi;
  for (int k = 1; k <= stages; ++k) {
    Rat eps = eps_schedule.empty() ? default_stage_eps(k) : eps_schedule[static_cast<std::size_t>(k - 1)];
    const Rat requested = eps;
    for (int j = 1; j < k; ++j) {
      Rat share = cert.stages[static_cast<std::size_t>(j - 1)].delta_stability *
                  Rat::inv_pow2(static_cast<unsigned>(k - j + 1));
      eps = std::min(eps, share);
    }
    if (eps < options.min_eps) {
      throw ScheduleInfeasible("schedule infeasible: stage " + std::to_string(k) + " step " +
                               eps.str() + " is below the minimum " + options.min_eps.str());
    }
    const NDGenerator u_k = nested_union(gens, static_cast<std::size_t>(k));
    DestroyResult res = destroy_step(phi, u_k, eps, max_gen, options.destroy);
    res.stage.stage = k;
    res.stage.eps_requested = requested;
    phi = std::move(res.homeo);
    cert.stages.push_back(std::move(res.stage));
    cert.stage_homeos.push_back(phi);
  }
  cert.final_homeo = phi;

  const std::size_t n = cert.stages.size();
  cert.budget_ledger.resize(n);
  Rat later;
  for (std::size_t k = n; k-- > 0;) {
    cert.budget_ledger[k] = cert.stages[k].delta_stability - later;
    if (cert.budget_ledger[k].sign() <= 0) {
      throw VerificationFailed("build_fap: ledger inequality fails at stage " + std::to_string(k + 1));
    }
    later += cert.stages[k].eps_effective;
  }

  for (const auto& st : cert.stages) {
    const int count = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(st.stage), gens.size()));
    cert.guarantees.push_back(Guarantee{st.stage, count, st.eps_effective * Rat(2), true});
  }
  const auto& last = cert.stages.back();
  cert.guarantees.push_back(Guarantee{last.stage, cert.guarantees.back().generator_count,
                                      last.eps_effective, false});

  for (const auto& gu : cert.guarantees) {
    const NDGenerator u = nested_union(gens, static_cast<std::size_t>(gu.generator_count));
    const auto& st = cert.stages[static_cast<std::size_t>(gu.stage - 1)];
    if (has_ap3(image(phi, u.cover(st.cover_generation)), gu.step_bound, gu.strict)) {
      throw VerificationFailed("build_fap: guarantee for stage " + std::to_string(gu.stage) +
                               " fails on the final homeomorphism");
    }
  }
  return cert;
}

VerifyReport verify_certificate(const FapCertificate& cert, const std::vector<NDGenerator>& gens) {
  auto fail = [](std::string check, std::string detail) {
    return VerifyReport{false, std::move(check), std::move(detail)};
  };
  if (cert.schema != kCertificateSchema) return fail("schema", "unknown schema '" + cert.schema + "'");
  if (gens.empty() || gens.size() != cert.generators.size()) {
    return fail("generators", "certificate names " + std::to_string(cert.generators.size()) +
                                  " generators, " + std::to_string(gens.size()) + " supplied");
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].describe() != cert.generators[i]) {
      return fail("generators", "generator " + std::to_string(i) + " is " + gens[i].describe() +
                                    ", certificate has " + cert.generators[i]);
    }
  }
  const std::size_t n = cert.stages.size();
  if (n == 0 || cert.stage_homeos.size() != n || cert.budget_ledger.size() != n) {
    return fail("structure", "stage, homeomorphism and ledger counts disagree");
  }
  if (cert.stage_homeos.back() != cert.final_homeo) {
    return fail("structure", "final homeomorphism differs from the last stage");
  }

  const PLHomeo id;
  for (std::size_t i = 0; i < n; ++i) {
    const StageCertificate& st = cert.stages[i];
    const std::string tag = "stage " + std::to_string(i + 1) + ": ";
    if (st.stage != static_cast<int>(i + 1)) return fail("structure", tag + "stage index out of order");
    if (st.cover_generation < 0) return fail("structure", tag + "negative cover generation");
    if (!st.verified) return fail("structure", tag + "not marked verified");

    Rat expected_eps = st.eps_requested;
    for (std::size_t j = 0; j < i; ++j) {
      expected_eps = std::min(expected_eps, cert.stages[j].delta_stability *
                                                Rat::inv_pow2(static_cast<unsigned>(i - j + 1)));
    }
    if (st.eps_effective != expected_eps || st.eps_effective.sign() <= 0 ||
        st.eps_effective >= Rat(1, 2)) {
      return fail("schedule", tag + "effective step " + st.eps_effective.str() + ", expected " +
                                  expected_eps.str());
    }

    const PLHomeo& prev = i == 0 ? id : cert.stage_homeos[i - 1];
    const PLHomeo& cur = cert.stage_homeos[i];
    const Rat moved = sup_dist(cur, prev);
    if (moved != st.perturbation_used || !(moved < st.eps_effective)) {
      return fail("perturbation", tag + "moved " + moved.str() + ", recorded " +
                                      st.perturbation_used.str());
    }

    const NDGenerator u = nested_union(gens, i + 1);
    const IntervalUnion img = image(cur, u.cover(st.cover_generation));
    if (has_ap3(img, st.eps_effective)) {
      return fail("stage-image", tag + "image has an AP of step >= " + st.eps_effective.str());
    }
    Stability s = stability(img, st.eps_effective);
    std::optional<Rat> gamma = s.defect ? std::optional<Rat>(s.defect->gamma) : std::nullopt;
    if (gamma != st.gamma) return fail("gamma", tag + "recomputed minimum defect differs");
    Rat delta = st.gamma ? std::min(st.eps_effective / Rat(2), *st.gamma / Rat(5))
                         : st.eps_effective / Rat(2);
    if (delta != st.delta_stability) {
      return fail("delta", tag + "delta " + st.delta_stability.str() + ", formula gives " + delta.str());
    }

    Rat later;
    for (std::size_t j = i + 1; j < n; ++j) later += cert.stages[j].eps_effective;
    if (!(later < st.delta_stability) || cert.budget_ledger[i] != st.delta_stability - later) {
      return fail("ledger", tag + "later steps sum to " + later.str() + " against delta " +
                                st.delta_stability.str());
    }
    if (!(sup_dist(cert.final_homeo, cur) < st.delta_stability)) {
      return fail("stability", tag + "final homeomorphism is not within delta");
    }
  }

  for (const auto& gu : cert.guarantees) {
    if (gu.stage < 1 || gu.stage > static_cast<int>(n) || gu.generator_count < 1 ||
        gu.generator_count > static_cast<int>(gens.size()) || gu.step_bound.sign() <= 0) {
      return fail("guarantee", "malformed guarantee");
    }
    const NDGenerator u = nested_union(gens, static_cast<std::size_t>(gu.generator_count));
    const auto& st = cert.stages[static_cast<std::size_t>(gu.stage - 1)];
    if (auto ap = has_ap3(image(cert.final_homeo, u.cover(st.cover_generation)), gu.step_bound, gu.strict)) {
      return fail("guarantee", "stage " + std::to_string(gu.stage) + ": AP " + ap->start.str() +
                                   " + k * " + ap->step.str() + " in the final image");
    }
  }
  return {};
}

APWitness rap_demo(const IntervalUnion& u, const PLHomeo& phi, int n) {
  if (n < 3) throw std::invalid_argument("rap_demo: length must be >= 3");
  if (u.measure().sign() <= 0) throw std::invalid_argument("rap_demo: the set has measure zero");
  auto w = ap_witness_long(image(phi, u), n);
  if (!w) throw VerificationFailed("rap_demo: image of a positive-measure set has measure zero");
  return *w;
}

}  // namespace apfree
