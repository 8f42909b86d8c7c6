#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace palette_turan;
namespace cf = palette_turan::chain_functions;

namespace {

// |X_i| and intersections straight from the definitions over all of C^3.
struct XCounts {
  long long x1 = 0, x2 = 0, x3 = 0, x12 = 0, x13 = 0, x23 = 0;
};

XCounts x_counts(const Palette& p) {
  const Color n = static_cast<Color>(p.colors());
  auto none = [&](int free, Color a, Color b, Color c) {
    for (Color d = 0; d < n; ++d) {
      Triple t{a, b, c};
      t[free] = d;
      if (p.contains(t)) return false;
    }
    return true;
  };
  XCounts x;
  for (Color a = 0; a < n; ++a)
    for (Color b = 0; b < n; ++b)
      for (Color c = 0; c < n; ++c) {
        const bool in1 = none(0, a, b, c), in2 = none(1, a, b, c), in3 = none(2, a, b, c);
        x.x1 += in1, x.x2 += in2, x.x3 += in3;
        x.x12 += in1 && in2, x.x13 += in1 && in3, x.x23 += in2 && in3;
      }
  return x;
}

Rational lemma3_rhs(const Palette& p) {
  const long long n = static_cast<long long>(p.colors());
  Rational sum = 0;
  for (Color a = 0; a < n; ++a)
    for (const auto& [i, j] : kPositionPairs)
      sum += square(make_rational(static_cast<long long>(oracle::degree(p, i, j, a)), n) - Rational(1, 2));
  return Rational(1, 4) + sum / (2 * n);
}

Rational target(long long k) { return make_rational(k * k - 5 * k + 7, (k - 1) * (k - 1)); }

}  // namespace

TEST(StarPalette, SmallCases) {
  EXPECT_EQ(star_palette(3), Palette(2, {{0, 1, 0}, {1, 0, 1}}));
  EXPECT_EQ(star_palette(4).size(), 9u);
  EXPECT_EQ(density(star_palette(4)), make_rational(1, 3));
  EXPECT_EQ(density(star_palette(48)), make_rational(2071, 2209));
  EXPECT_THROW(star_palette(2), invalid_input);
}

TEST(StarPalette, MatchesFilteredEnumeration) {
  for (long long k = 3; k <= 40; ++k)
    EXPECT_EQ(star_palette(static_cast<std::size_t>(k)).triples(), Palette(k - 1, oracle::star_triples(k)).triples());
}

TEST(StarPalette, DensityFormulaAndTripleCount) {
  for (long long k = 3; k <= 200; ++k) {
    const Palette p = star_palette(static_cast<std::size_t>(k));
    const long long n = k - 1;
    EXPECT_EQ(static_cast<long long>(p.size()), n * (n * n - 3 * n + 3)) << k;
    EXPECT_EQ(density(p), star_palette_density_formula(k)) << k;
    EXPECT_EQ(star_palette_density_formula(k), target(k)) << k;
  }
  EXPECT_EQ(star_palette_density_formula(3), make_rational(1, 4));
  EXPECT_EQ(star_palette_density_formula(4), make_rational(1, 3));
  EXPECT_EQ(star_palette_density_formula(1000), make_rational(995007, 998001));
}

TEST(Lemma3, CompleteIsTight) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto r = verify_lemma3(Palette::complete(n));
    EXPECT_EQ(r.density, Rational(1));
    EXPECT_EQ(r.rhs, Rational(1));
    EXPECT_TRUE(r.passed);
  }
}

TEST(Lemma3, EmptyPalette) {
  const auto r = verify_lemma3(Palette::empty(3));
  EXPECT_EQ(r.density, Rational(0));
  EXPECT_EQ(r.rhs, Rational(1));
  EXPECT_TRUE(r.passed && r.inclusion_exclusion_passed);
}

TEST(Lemma3, ThousandRandomPalettesAgainstDefinitions) {
  SplitMix64 rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const Palette p = random_palette(rng, 6);
    const auto r = verify_lemma3(p);
    ASSERT_TRUE(r.passed) << io::to_json(p).dump();
    ASSERT_TRUE(r.inclusion_exclusion_passed) << io::to_json(p).dump();
    ASSERT_TRUE(r.degree_formulas_agree) << io::to_json(p).dump();
    EXPECT_EQ(r.rhs, lemma3_rhs(p));
    if (p.colors() <= 4) {
      const XCounts x = x_counts(p);
      EXPECT_EQ(r.x1, x.x1);
      EXPECT_EQ(r.x2, x.x2);
      EXPECT_EQ(r.x3, x.x3);
      EXPECT_EQ(r.x12, x.x12);
      EXPECT_EQ(r.x13, x.x13);
      EXPECT_EQ(r.x23, x.x23);
    }
  }
}

TEST(Lemma3, HoldsOnStarPalettes) {
  for (std::size_t k = 3; k <= 30; ++k) {
    const auto r = verify_lemma3(star_palette(k));
    EXPECT_TRUE(r.passed && r.inclusion_exclusion_passed && r.degree_formulas_agree) << k;
  }
}

TEST(ChainFunctions, ClosedFormsAtRandomPoints) {
  SplitMix64 rng(5);
  for (long long k : {31, 48, 100}) {
    for (int i = 0; i < 100; ++i) {
      const Rational x = random_rational_at_least(rng, make_rational(1, 64), 400);
      EXPECT_EQ(cf::f1(k, x), cf::f1_closed(k, x));
      EXPECT_EQ(cf::g1(k, x), cf::g1_closed(k, x));
      // Independent transcription of f and g.
      const Rational c = make_rational(k - 2, k - 1);
      const Rational m = 1 - 1 / x;
      EXPECT_EQ(cf::f1(k, x), square(m - Rational(1, 2)) + 4 * square(c - m));
      const Rational m2 = 2 - 1 / x;
      EXPECT_EQ(cf::g1(k, x), square(m2 - 1) / 2 + 4 * square(c - m2 / 2));
    }
  }
}

TEST(Claim3, EqualityAtTheDoubleRoot) {
  for (long long k : {48, 60, 100, 1000}) {
    const auto c = verify_claim3(k, Rational(k - 1));
    EXPECT_TRUE(c.holds());
    EXPECT_EQ(c.value, c.line);
    EXPECT_EQ(c.value, square(make_rational(k - 3, 2 * k - 2)));
    EXPECT_EQ(c.factored, Rational(0));
  }
}

TEST(Claim3, EqualityAtTheRangeStart) {
  const auto c = verify_claim3(48, make_rational(47, 9));
  EXPECT_TRUE(c.holds());
  EXPECT_EQ(c.value, c.line);
  EXPECT_EQ(c.value, make_rational(1865, 8836));
}

TEST(Claim3, BelowRangeIsInapplicable) {
  EXPECT_EQ(verify_claim3(48, make_rational(46, 9)).outcome, ClaimOutcome::inapplicable);
  EXPECT_THROW(verify_claim3(3, Rational(10)), invalid_input);
}

TEST(Claim4, EqualityAtTheDoubleRoot) {
  for (long long k : {30, 48, 100}) {
    const auto c = verify_claim4(k, make_rational(k - 1, 2));
    EXPECT_TRUE(c.holds());
    EXPECT_EQ(c.value, c.line);
  }
  EXPECT_EQ(verify_claim4(48, make_rational(47, 2)).value, make_rational(2025, 4418));
}

TEST(Claims34, RandomInRangePoints) {
  SplitMix64 rng(34);
  for (long long k : {31, 48, 100}) {
    for (int i = 0; i < 100; ++i) {
      const Rational x3 = random_rational_at_least(rng, cf::claim3_range_start(k), 4 * k);
      const Rational x4 = random_rational_at_least(rng, cf::claim4_range_start(k), 4 * k);
      const auto c3 = verify_claim3(k, x3);
      const auto c4 = verify_claim4(k, x4);
      EXPECT_TRUE(c3.holds()) << k << " " << to_string(x3);
      EXPECT_TRUE(c4.holds()) << k << " " << to_string(x4);
      EXPECT_GE(c3.factored, 0);
      EXPECT_GE(c4.factored, 0);
    }
  }
}

TEST(Claim3, FailsJustOutsideTheRangeForLargeK) {
  // Below the third root the cubic is negative: the tangent bound is false there.
  const long long k = 48;
  const Rational x = cf::claim3_range_start(k) - make_rational(1, 100);
  EXPECT_GT(cf::f1(k, x), cf::claim3_line(k, x));
}

TEST(Thresholds, ReproduceFortyEightAndThirty) {
  const auto t = thresholds();
  EXPECT_EQ(t.k_star, 48);
  EXPECT_EQ(t.k_g, 30);
  EXPECT_FALSE(f_side_threshold_holds(47));
  EXPECT_FALSE(g_side_threshold_holds(29));
}

TEST(Thresholds, MatchQuadraticForms) {
  // Clearing denominators: k^2 - 49k + 93 >= 0 and k^2 - 31k + 57 >= 0.
  for (long long k = 4; k <= 500; ++k) {
    EXPECT_EQ(f_side_threshold_holds(k), k * k - 49 * k + 93 >= 0) << k;
    EXPECT_EQ(g_side_threshold_holds(k), k * k - 31 * k + 57 >= 0) << k;
  }
}

TEST(FinalIdentity, HoldsEverywhere) {
  EXPECT_TRUE(final_identity(3));
  EXPECT_TRUE(final_identity(48));
  for (long long k = 2; k < 1002; ++k) EXPECT_TRUE(final_identity(k)) << k;
  EXPECT_THROW(final_identity(1), invalid_input);
}

TEST(ColorStats, RangesAndInfinities) {
  SplitMix64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const Palette p = random_palette(rng, 5);
    for (const auto& s : color_stats(p)) {
      EXPECT_GE(s.m_a, 0);
      EXPECT_LE(s.m_a, 1);
      EXPECT_LE(s.m_b, 2);
      EXPECT_EQ(s.big_a.has_value(), s.m_a < 1);
      EXPECT_EQ(s.big_b.has_value(), s.m_b < 2);
      if (s.big_a) EXPECT_EQ(*s.big_a, 1 / (1 - s.m_a));
      if (s.big_d) EXPECT_EQ(*s.big_d, 1 / (2 - s.m_d));
    }
  }
}

TEST(ColorStats, StarPaletteValues) {
  // Every color has n-1 good partners in each of the six position pairs.
  const long long k = 10, n = k - 1;
  const Palette p = star_palette(k);
  const auto stats = color_stats(p);
  for (Color a = 0; a < p.colors(); ++a) {
    const auto& s = stats[a];
    for (std::size_t r = 0; r < kPositionPairs.size(); ++r) {
      const auto [i, j] = kPositionPairs[r];
      EXPECT_EQ(s.e[r], make_rational(static_cast<long long>(oracle::degree(p, i, j, a)), n));
    }
    EXPECT_EQ(s.m_a, make_rational(n - 1, n));
    EXPECT_EQ(s.m_b, make_rational(2 * (n - 1), n));
    EXPECT_EQ(*s.big_a, Rational(n));
    EXPECT_EQ(*s.big_b, make_rational(n, 2));
    EXPECT_EQ(s.m_c, s.m_a);
    EXPECT_EQ(s.m_d, s.m_b);
  }
}

TEST(Chain, StarPalettesReachTheBoundWithEquality) {
  for (long long k : {48, 60, 100}) {
    const auto red = minimality_reduce(star_palette(static_cast<std::size_t>(k)));
    EXPECT_TRUE(red.removed.empty());
    const auto r = chain_verify(red.palette, k);
    EXPECT_EQ(r.verdict, ChainVerdict::bound_holds) << k;
    EXPECT_TRUE(r.density_equals_target);
    EXPECT_EQ(r.density, target(k));
    for (const auto& s : r.steps) EXPECT_EQ(s.status, StepStatus::pass) << k << " " << s.name << " " << s.note;
    ASSERT_TRUE(r.max_tt);
    EXPECT_EQ(*r.max_tt, static_cast<std::size_t>(k - 1));
  }
}

TEST(Chain, CompletePaletteIsDegenerate) {
  const auto red = minimality_reduce(Palette::complete(3));
  const auto r = chain_verify(red.palette, 48);
  EXPECT_NE(r.verdict, ChainVerdict::violated);
  EXPECT_NE(r.verdict, ChainVerdict::bound_holds);
  bool degenerate = false;
  for (const auto& s : r.steps) degenerate |= s.status == StepStatus::degenerate;
  EXPECT_TRUE(degenerate);
  ASSERT_EQ(r.stats.size(), 1u);
  EXPECT_EQ(r.stats[0].m_a, Rational(1));
  EXPECT_FALSE(r.stats[0].big_a.has_value());
}

TEST(Chain, NonMinimalInputIsInapplicable) {
  const auto r = chain_verify(Palette(3, {{0, 1, 0}, {1, 0, 1}}), 48);
  EXPECT_EQ(r.verdict, ChainVerdict::inapplicable);
  EXPECT_EQ(r.steps.front().status, StepStatus::inapplicable);
  EXPECT_NE(r.steps.front().note.find("color 2"), std::string::npos);
}

TEST(Chain, RandomSparseReducedPalettesNeverViolate) {
  SplitMix64 rng(100);
  int checked = 0, applicable_steps = 0;
  while (checked < 100) {
    const Palette p = minimality_reduce(random_palette(rng, 6)).palette;
    if (p.colors() == 0 || density(p) > Rational(1, 4)) continue;
    ++checked;
    const auto r = chain_verify(p, 48);
    EXPECT_NE(r.verdict, ChainVerdict::violated) << io::to_json(p).dump();
    for (const auto& s : r.steps) {
      EXPECT_NE(s.status, StepStatus::fail) << s.name << " " << io::to_json(p).dump();
      applicable_steps += s.status == StepStatus::pass;
    }
  }
  EXPECT_GT(applicable_steps, 0);
}

TEST(Chain, StepOneIsTheDegreeSumOnSideOne) {
  const long long k = 48;
  const Palette p = star_palette(k);
  const auto r = chain_verify(p, k);
  Rational sum = 0;
  for (const auto& s : r.stats) sum += *s.big_a;
  const auto* step = r.step("degree sum M_A <= (k-1)n");
  ASSERT_NE(step, nullptr);
  EXPECT_EQ(step->lhs, sum);
  EXPECT_EQ(step->rhs, Rational((k - 1) * (k - 1)));
}

TEST(Refined, FortyEightHolds) {
  const auto v = refined_verdict(48);
  EXPECT_EQ(v.status, RefinedStatus::holds);
  EXPECT_GE(v.linear_factor_at_lower, 0);
  EXPECT_EQ(v.lower, make_rational(47 * 47, 9 * 46));
  EXPECT_EQ(v.target, square(make_rational(45, 94)));
}

TEST(Refined, ThirtyOneDoesNotHold) {
  const auto v = refined_verdict(31);
  EXPECT_NE(v.status, RefinedStatus::holds);
}

TEST(Refined, FailureWitnessesAreExactAndFeasible) {
  for (long long k = 31; k <= 60; ++k) {
    const auto v = refined_verdict(k);
    if (v.status != RefinedStatus::fails) continue;
    ASSERT_TRUE(v.best && v.best_excess);
    const auto& b = *v.best;
    EXPECT_GE(b.x1, v.lower);
    EXPECT_GE(b.w, 0);
    EXPECT_LE(b.w, 1);
    EXPECT_LE(b.w * b.x1 + (1 - b.w) * b.x2, Rational(k - 1));
    const Rational mean_f1 = b.w * cf::f1_closed(k, b.x1) + (1 - b.w) * cf::f1_closed(k, b.x2);
    EXPECT_EQ(mean_f1 - v.target, *v.best_excess);
    EXPECT_GT(*v.best_excess, 0);
  }
}

TEST(Refined, HoldsExactlyWhenTheTangentRootIsBelowTheLowerBound) {
  for (long long k = 31; k <= 120; ++k) {
    const auto v = refined_verdict(k);
    EXPECT_EQ(v.status == RefinedStatus::holds, v.lower >= v.tangent_root) << k;
    EXPECT_NE(v.status, RefinedStatus::unknown) << k;
  }
}

TEST(Refined, RandomProfilesRespectHoldingVerdicts) {
  SplitMix64 rng(48);
  for (long long k : {48, 60}) {
    const auto v = refined_verdict(k);
    ASSERT_EQ(v.status, RefinedStatus::holds);
    int tried = 0;
    while (tried < 300) {
      const std::size_t m = 1 + rng.below(6);
      std::vector<Rational> xs;
      Rational sum = 0;
      for (std::size_t i = 0; i < m; ++i) {
        xs.push_back(random_rational_at_least(rng, v.lower, static_cast<std::uint64_t>(3 * k)));
        sum += xs.back();
      }
      if (sum > Rational(k - 1) * static_cast<long long>(m)) continue;
      ++tried;
      Rational mean_f1 = 0;
      for (const auto& x : xs) mean_f1 += cf::f1(k, x);
      EXPECT_LE(mean_f1 / static_cast<long long>(m), v.target);
    }
  }
}

TEST(Refined, RandomProfilesNeverBeatTheTwoPointOptimum) {
  SplitMix64 rng(40);
  for (long long k : {31, 40, 47}) {
    const auto v = refined_verdict(k);
    const double best = to_double(*v.best_excess);
    const double lower = to_double(v.lower);
    int tried = 0;
    while (tried < 2000) {
      const std::size_t m = 2 + rng.below(5);
      std::vector<double> xs;
      double sum = 0;
      for (std::size_t i = 0; i < m; ++i) {
        // Mostly near the lower bound with the odd large value, the shape that helps.
        const double x = rng.coin(0.7) ? lower + rng.uniform() * 3 : lower + rng.uniform() * 50 * k;
        xs.push_back(x);
        sum += x;
      }
      if (sum > static_cast<double>(k - 1) * static_cast<double>(m)) continue;
      ++tried;
      double mean_f1 = 0;
      for (double x : xs) mean_f1 += cf::f1_double(k, x);
      EXPECT_LE(mean_f1 / static_cast<double>(m) - to_double(v.target), best + 1e-9) << k;
    }
  }
}

TEST(Refined, ThresholdOverTheDocumentedRange) {
  const auto r = refined_threshold(31, 48, 4);
  ASSERT_EQ(r.trace.size(), 18u);
  ASSERT_TRUE(r.least_holding);
  EXPECT_EQ(r.trace.back().status, RefinedStatus::holds);
  // Every k before the boundary fails with an exact witness; none is unknown.
  for (const auto& v : r.trace) {
    if (v.k < *r.least_holding) EXPECT_EQ(v.status, RefinedStatus::fails) << v.k;
    else EXPECT_EQ(v.status, RefinedStatus::holds) << v.k;
  }
  const auto serial = refined_threshold(31, 48, 1);
  EXPECT_EQ(io::to_json(serial).dump(), io::to_json(r).dump());
  EXPECT_THROW(refined_threshold(30, 48), invalid_input);
}
