#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "apfree/interval_union.hpp"
#include "apfree/rat.hpp"
#include "support.hpp"

namespace apfree {
namespace {

using testing::R;
using testing::U;

TEST(Rat, ParsesAndPrintsCanonically) {
  EXPECT_EQ(R("2/4").str(), "1/2");
  EXPECT_EQ(R("3").str(), "3/1");
  EXPECT_EQ(R("-6/8").str(), "-3/4");
  EXPECT_EQ(Rat(0).str(), "0/1");
  EXPECT_THROW(R("1/0"), std::invalid_argument);
  EXPECT_THROW(R("abc"), std::invalid_argument);
  EXPECT_THROW(R(""), std::invalid_argument);
  EXPECT_THROW(R("0.5"), std::invalid_argument);
}

TEST(Rat, ExactArithmetic) {
  EXPECT_EQ(R("1/3") + R("1/6"), R("1/2"));
  EXPECT_EQ(R("1/3") * R("3/7"), R("1/7"));
  EXPECT_EQ(R("1/2") - R("3/4"), R("-1/4"));
  EXPECT_EQ(R("1/2") / R("1/4"), Rat(2));
  EXPECT_THROW(R("1/2") / Rat(0), std::domain_error);
  EXPECT_LT(R("1/3"), R("34/100"));
  EXPECT_EQ(Rat::inv_pow2(10), Rat(1, 1024));
  EXPECT_EQ(floor_to_long(R("-1/2")), -1);
  EXPECT_EQ(floor_int(R("7/2")), 3);
  EXPECT_EQ(ceil_int(R("7/2")), 4);
  EXPECT_EQ(ceil_int(R("4")), 4);
}

TEST(Rat, HashAgreesWithEquality) {
  RatHash h;
  EXPECT_EQ(h(R("2/6")), h(R("1/3")));
  EXPECT_EQ(h(R("-1/3")), h(Rat(-1) / Rat(3)));
}

TEST(ClosedInterval, ValidatesBounds) {
  EXPECT_THROW(ClosedInterval(R("1/2"), R("1/3")), std::invalid_argument);
  EXPECT_THROW(ClosedInterval(R("-1/2"), R("1/3")), std::invalid_argument);
  EXPECT_THROW(ClosedInterval(R("0"), R("3/2")), std::invalid_argument);
  ClosedInterval c(R("1/4"), R("1/2"));
  EXPECT_EQ(c.length(), R("1/4"));
  EXPECT_EQ(c.center(), R("3/8"));
  EXPECT_TRUE(c.contains(R("1/4")));
  EXPECT_FALSE(c.contains(R("1/5")));
  EXPECT_TRUE(ClosedInterval(R("1/3"), R("1/3")).degenerate());
}

TEST(Normalize, MergesOverlapAndTouching) {
  EXPECT_EQ(U({{"0", "1/2"}, {"1/4", "3/4"}}), U({{"0", "3/4"}}));
  EXPECT_EQ(U({{"0", "1/3"}, {"1/3", "1/2"}}).size(), 1u);
  EXPECT_EQ(U({{"0", "1/3"}, {"1/3", "1/2"}})[0], ClosedInterval(R("0"), R("1/2")));
  auto p = U({{"1/2", "1/2"}});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], ClosedInterval(R("1/2"), R("1/2")));
  EXPECT_EQ(U({{"2/3", "1"}, {"0", "1/3"}})[0].hi(), R("1/3"));
  EXPECT_EQ(U({{"0", "1/4"}, {"1/8", "1/8"}}).size(), 1u);
}

TEST(Measure, SumsLengths) {
  EXPECT_EQ(U({{"0", "1/3"}, {"2/3", "1"}}).measure(), R("2/3"));
  EXPECT_EQ(IntervalUnion().measure(), Rat(0));
  EXPECT_EQ(U({{"1/4", "1/4"}}).measure(), Rat(0));
}

TEST(Contains, ClosedEndpoints) {
  auto u = U({{"0", "1/3"}, {"2/3", "1"}});
  EXPECT_FALSE(u.contains(R("1/2")));
  EXPECT_TRUE(u.contains(R("1/3")));
  EXPECT_TRUE(u.contains(R("2/3")));
  EXPECT_FALSE(IntervalUnion().contains(R("1/2")));
}

TEST(GapPoint, WidestGapMidpoint) {
  auto u = U({{"0", "1/3"}, {"2/3", "1"}});
  EXPECT_EQ(u.gap_point_in(ClosedInterval(R("1/4"), R("3/4"))), R("1/2"));
  EXPECT_FALSE(U({{"0", "1"}}).gap_point_in(ClosedInterval(R("1/4"), R("3/4"))).has_value());
  EXPECT_EQ(IntervalUnion().gap_point_in(ClosedInterval(R("0"), R("1"))), R("1/2"));
  // A degenerate component leaves gaps on both sides; the left one wins the tie.
  auto pt = U({{"1/2", "1/2"}});
  EXPECT_EQ(pt.gap_point_in(ClosedInterval(R("1/4"), R("3/4"))), R("3/8"));
  EXPECT_FALSE(U({{"0", "1/2"}}).gap_point_in(ClosedInterval(R("1/2"), R("1/2"))).has_value());
}

TEST(NormalizeProperty, CanonicalAndPointSetPreserving) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<ClosedInterval> raw;
    const int n = static_cast<int>(testing::uniform(rng, 0, 7));
    for (int i = 0; i < n; ++i) {
      long a = testing::uniform(rng, 0, 24), b = testing::uniform(rng, 0, 24);
      if (a > b) std::swap(a, b);
      raw.emplace_back(Rat(a, 24), Rat(b, 24));
    }
    auto u = IntervalUnion::normalize(raw);
    for (std::size_t i = 1; i < u.size(); ++i) ASSERT_LT(u[i - 1].hi(), u[i].lo());
    for (long t = 0; t <= 96; ++t) {
      Rat x(t, 96);
      bool in_raw = false;
      for (const auto& c : raw) in_raw = in_raw || c.contains(x);
      ASSERT_EQ(in_raw, u.contains(x));
    }
    ASSERT_EQ(IntervalUnion::normalize({u.components().begin(), u.components().end()}), u);
    Rat m;
    for (const auto& c : u.components()) m += c.length();
    ASSERT_EQ(m, u.measure());
  }
}

TEST(GapPointProperty, ResultIsAnInteriorGapPoint) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 400; ++trial) {
    auto u = testing::random_union(rng, 5, 32);
    long a = testing::uniform(rng, 0, 32), b = testing::uniform(rng, 0, 32);
    if (a > b) std::swap(a, b);
    ClosedInterval w(Rat(a, 32), Rat(b, 32));
    auto p = u.gap_point_in(w);
    if (p) {
      ASSERT_FALSE(u.contains(*p));
      ASSERT_LT(w.lo(), *p);
      ASSERT_LT(*p, w.hi());
    } else {
      // No gap: a fine grid of the window interior is covered.
      for (long t = 1; t < 64; ++t) {
        Rat x = w.lo() + w.length() * Rat(t, 64);
        ASSERT_TRUE(w.degenerate() || u.contains(x));
      }
    }
  }
}

}  // namespace
}  // namespace apfree
