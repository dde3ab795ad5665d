#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "apfree/construct.hpp"
#include "apfree/errors.hpp"
#include "support.hpp"

namespace apfree {
namespace {

using testing::R;
using testing::U;

const NDGenerator& cantor() {
  static const NDGenerator c = NDGenerator::cantor(R("1/3"));
  return c;
}

const DestroyResult& quarter_step() {
  static const DestroyResult res = destroy_step(PLHomeo(), cantor(), R("1/4"), 64);
  return res;
}

void check_plan(const PLHomeo& f, const NDGenerator& gen, const Rat& eps, const DestroyResult& res) {
  const PartitionPlan& plan = res.plan;
  const IntervalUnion img = image(f, gen.cover(res.stage.cover_generation));
  ASSERT_FALSE(plan.is_identity());
  ASSERT_GE(plan.r, 3);
  ASSERT_GT(Rat(mpq_class(plan.r)) * eps, Rat(1));
  const std::size_t n = plan.cells.size();
  ASSERT_EQ(plan.cell_pieces.size(), n);
  ASSERT_EQ(plan.piece_cuts.size(), n);
  ASSERT_EQ(plan.targets.size(), n);
  ASSERT_EQ(plan.anchors.points.size(), n);
  ASSERT_EQ(plan.cell_pieces.front(), 1);
  ASSERT_EQ(plan.cell_pieces.back(), plan.r);
  ASSERT_EQ(plan.cells.front().lo(), Rat(0));
  ASSERT_EQ(plan.cells.back().hi(), Rat(1));
  for (std::size_t c = 0; c < n; ++c) {
    const auto& [left, right] = plan.piece_cuts[c];
    const auto& cell = plan.cells[c];
    const auto& z = plan.targets[c];
    ASSERT_LT(right - left, eps);
    if (c > 0) ASSERT_LT(plan.cell_pieces[c - 1], plan.cell_pieces[c]);
    if (c > 0) ASSERT_FALSE(img.contains(left));
    if (c + 1 < n) ASSERT_FALSE(img.contains(right));
    if (c > 0) ASSERT_LT(left, cell.lo());
    if (c + 1 < n) ASSERT_LT(cell.hi(), right);
    ASSERT_LT(z.length() * Rat(4), plan.anchors.defect);
    ASSERT_TRUE(z.contains(plan.anchors.points[c]));
    ASSERT_TRUE(cell.contains(z.lo()) && cell.contains(z.hi()));
    ASSERT_EQ(plan.contraction.eval(cell.lo()), z.lo());
    ASSERT_EQ(plan.contraction.eval(cell.hi()), z.hi());
  }
  for (const auto& comp : img.components()) {
    bool covered = false;
    for (const auto& cell : plan.cells) covered = covered || (cell.contains(comp.lo()) && cell.contains(comp.hi()));
    ASSERT_TRUE(covered);
  }
  // Points from three distinct targets never form an AP.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (int s = 0; s <= 2; ++s) {
          Rat a = plan.targets[i].lo() + plan.targets[i].length() * Rat(s, 2);
          Rat b = plan.targets[j].lo() + plan.targets[j].length() * Rat(2 - s, 2);
          Rat c = plan.targets[k].lo() + plan.targets[k].length() * Rat(s, 2);
          ASSERT_GT(abs(a + c - b * Rat(2)), Rat(0));
        }
      }
    }
  }
  const Rat moved = sup_dist(res.homeo, f);
  ASSERT_LT(moved, eps);
  ASSERT_EQ(moved, sup_dist(plan.contraction, PLHomeo()));
  ASSERT_EQ(moved, res.stage.perturbation_used);
  ASSERT_EQ(res.homeo, compose(plan.contraction, f));
  ASSERT_FALSE(has_ap3(image(res.homeo, gen.cover(res.stage.cover_generation)), eps));
}

TEST(DestroyStep, ShortcutKeepsMap) {
  auto res = destroy_step(PLHomeo(), NDGenerator::points({R("1/2")}), R("1/4"), 64);
  EXPECT_EQ(res.homeo, PLHomeo());
  EXPECT_TRUE(res.plan.is_identity());
  EXPECT_TRUE(res.stage.verified);
  EXPECT_EQ(res.stage.perturbation_used, Rat(0));
}

TEST(DestroyStep, CantorQuarter) {
  const auto& res = quarter_step();
  check_plan(PLHomeo(), cantor(), R("1/4"), res);
  const auto& cover = cantor().cover(res.stage.cover_generation);
  EXPECT_FALSE(brute_force_ap3(image(res.homeo, cover), R("1/4"), 729));
  EXPECT_TRUE(in_H_eps(res.homeo, cantor(), res.stage.cover_generation, R("1/4")));
  EXPECT_TRUE(in_H_eps(res.homeo, cantor(), res.stage.cover_generation + 1, R("1/4")));
  EXPECT_TRUE(res.stage.gamma);
  EXPECT_EQ(res.stage.delta_stability, std::min(R("1/8"), *res.stage.gamma / Rat(5)));
}

TEST(DestroyStep, AnchorEveryPiece) {
  DestroyOptions opt;
  opt.anchor_empty_cells = true;
  auto res = destroy_step(PLHomeo(), cantor(), R("1/4"), 64, opt);
  check_plan(PLHomeo(), cantor(), R("1/4"), res);
  EXPECT_EQ(res.plan.cells.size(), res.plan.r.get_ui());
}

TEST(DestroyStep, Rejections) {
  EXPECT_THROW(destroy_step(PLHomeo(), cantor(), R("3/5"), 64), std::invalid_argument);
  EXPECT_THROW(destroy_step(PLHomeo(), cantor(), Rat(0), 64), std::invalid_argument);
  EXPECT_THROW(destroy_step(PLHomeo(), cantor(), R("1/4"), 1), RefinementExhausted);
}

TEST(DestroyStepProperty, RandomStartsAndGenerators) {
  std::mt19937_64 rng(51);
  const std::vector<NDGenerator> gens{
      cantor(), NDGenerator::cantor(R("1/2")), NDGenerator::cantor(R("3/5")),
      NDGenerator::union_of({cantor(), NDGenerator::points({R("1/2"), R("13/16")})})};
  for (int trial = 0; trial < 24; ++trial) {
    auto f = testing::random_homeo(rng, 4);
    const auto& gen = gens[static_cast<std::size_t>(trial) % gens.size()];
    Rat eps(1, testing::uniform(rng, 3, 40));
    auto res = destroy_step(f, gen, eps, 64);
    if (res.plan.is_identity()) {
      ASSERT_EQ(res.homeo, f);
      ASSERT_TRUE(in_H_eps(f, gen, res.stage.cover_generation, eps));
    } else {
      check_plan(f, gen, eps, res);
    }
  }
}

TEST(InHEps, Examples) {
  EXPECT_FALSE(in_H_eps(PLHomeo(), cantor(), 0, R("1/2")));
  EXPECT_TRUE(in_H_eps(PLHomeo(), NDGenerator::points({R("1/2")}), 0, R("1/4")));
}

TEST(Stability, PerturbationsKeepDoubleStepFree) {
  const auto& res = quarter_step();
  const auto& cover = cantor().cover(res.stage.cover_generation);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto h = perturb(res.homeo, res.stage.delta_stability, seed);
    ASSERT_LT(sup_dist(h, res.homeo), res.stage.delta_stability);
    ASSERT_FALSE(has_ap3(image(h, cover), R("1/2"), true));
  }
}

TEST(BuildFap, SingleStage) {
  auto cert = build_fap({cantor()}, 1, {R("1/4")}, 64);
  ASSERT_EQ(cert.stages.size(), 1u);
  EXPECT_EQ(cert.stages[0].eps_effective, R("1/4"));
  ASSERT_EQ(cert.guarantees.size(), 2u);
  EXPECT_EQ(cert.guarantees[0], (Guarantee{1, 1, R("1/2"), true}));
  EXPECT_EQ(cert.guarantees[1], (Guarantee{1, 1, R("1/4"), false}));
  EXPECT_EQ(cert.final_homeo, quarter_step().homeo);
  EXPECT_TRUE(verify_certificate(cert, {cantor()}).ok);
}

TEST(BuildFap, Rejections) {
  EXPECT_THROW(build_fap({}, 1, {}, 64), std::invalid_argument);
  EXPECT_THROW(build_fap({cantor()}, 0, {}, 64), std::invalid_argument);
  EXPECT_THROW(build_fap({cantor()}, 2, {R("1/4")}, 64), std::invalid_argument);
  EXPECT_THROW(build_fap({cantor()}, 1, {R("1/2")}, 64), std::invalid_argument);
  BuildOptions opt;
  opt.min_eps = R("1/100");
  EXPECT_THROW(build_fap({cantor()}, 3, {}, 64, opt), ScheduleInfeasible);
}

TEST(BuildFap, SeveralGeneratorsVerifyAndLedger) {
  const std::vector<NDGenerator> gens{cantor(), NDGenerator::points({R("1/2")}), NDGenerator::cantor(R("1/2"))};
  auto cert = build_fap(gens, 3, {}, 64);
  ASSERT_EQ(cert.stages.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    Rat later;
    for (std::size_t j = k + 1; j < 3; ++j) later += cert.stages[j].eps_effective;
    ASSERT_LT(later, cert.stages[k].delta_stability);
    ASSERT_EQ(cert.budget_ledger[k], cert.stages[k].delta_stability - later);
    ASSERT_LE(cert.stages[k].eps_effective, default_stage_eps(static_cast<int>(k) + 1));
  }
  EXPECT_EQ(cert.guarantees.back().generator_count, 3);
  auto report = verify_certificate(cert, gens);
  EXPECT_TRUE(report.ok) << report.check << ": " << report.detail;
  EXPECT_EQ(verify_certificate(cert, {cantor()}).check, "generators");
}

TEST(VerifyCertificate, DetectsTampering) {
  auto cert = build_fap({cantor()}, 2, {}, 64);
  ASSERT_TRUE(verify_certificate(cert, {cantor()}).ok);

  auto identity_final = cert;
  identity_final.final_homeo = PLHomeo();
  identity_final.stage_homeos.back() = PLHomeo();
  EXPECT_FALSE(verify_certificate(identity_final, {cantor()}).ok);

  auto bad_delta = cert;
  bad_delta.stages[0].delta_stability += Rat::inv_pow2(30);
  auto report = verify_certificate(bad_delta, {cantor()});
  EXPECT_FALSE(report.ok);

  auto bad_schema = cert;
  bad_schema.schema = "other";
  EXPECT_EQ(verify_certificate(bad_schema, {cantor()}).check, "schema");

  auto bad_eps = cert;
  bad_eps.stages[0].eps_effective = R("1/8");
  EXPECT_EQ(verify_certificate(bad_eps, {cantor()}).check, "schedule");
}

TEST(RapDemo, Examples) {
  EXPECT_EQ(rap_demo(U({{"0", "1"}}), PLHomeo(), 20), (APWitness{Rat(0), R("1/19"), 20}));
  EXPECT_EQ(rap_demo(U({{"0", "1/2"}}), testing::H({{"0", "0"}, {"1/2", "1/4"}, {"1", "1"}}), 5),
            (APWitness{Rat(0), R("1/16"), 5}));
  EXPECT_THROW(rap_demo(testing::points_union({"0", "1/2"}), PLHomeo(), 5), std::invalid_argument);
  EXPECT_THROW(rap_demo(U({{"0", "1"}}), PLHomeo(), 2), std::invalid_argument);
}

}  // namespace
}  // namespace apfree
