#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace palette_turan;

namespace {

Palette star3() { return Palette(2, {{0, 1, 0}, {1, 0, 1}}); }

}  // namespace

TEST(Rational, LowestTermsAndExactArithmetic) {
  const Rational r = make_rational(6, -8);
  EXPECT_EQ(to_string(r), "-3/4");
  EXPECT_EQ(make_rational(1, 3) + make_rational(1, 6), make_rational(1, 2));
  EXPECT_EQ(to_decimal(make_rational(1, 3), 5), "0.33333");
  EXPECT_EQ(to_decimal(make_rational(-7, 2), 2), "-3.50");
  EXPECT_EQ(from_double(0.5), make_rational(1, 2));
}

TEST(Palette, RejectsOutOfRangeAndDuplicateTriples) {
  EXPECT_THROW(Palette(2, {{0, 2, 0}}), invalid_input);
  EXPECT_THROW(Palette(2, {{0, 1, 0}, {0, 1, 0}}), invalid_input);
}

TEST(Palette, TriplesAreSortedAndSearchable) {
  const Palette p(3, {{2, 1, 0}, {0, 0, 1}, {1, 2, 2}});
  EXPECT_EQ(p.triples().front(), (Triple{0, 0, 1}));
  EXPECT_TRUE(p.contains({1, 2, 2}));
  EXPECT_FALSE(p.contains({1, 2, 1}));
  EXPECT_FALSE(p.contains({5, 0, 0}));
}

TEST(Density, StarThreeIsOneQuarter) { EXPECT_EQ(density(star3()), make_rational(1, 4)); }

TEST(Density, CompletePaletteIsOne) {
  for (std::size_t n = 1; n <= 5; ++n) EXPECT_EQ(density(Palette::complete(n)), Rational(1));
}

TEST(Density, StarFourIsOneThird) {
  const Palette p(3, oracle::star_triples(4));
  EXPECT_EQ(p.size(), 9u);
  EXPECT_EQ(density(p), make_rational(1, 3));
}

TEST(Density, ZeroColorsIsAnError) { EXPECT_THROW(density(Palette::empty(0)), invalid_input); }

TEST(GoodPairs, StarThree) {
  const GoodPairTable g(star3());
  for (Color a = 0; a < 2; ++a) {
    for (Color b = 0; b < 2; ++b) {
      EXPECT_EQ(g.good(2, 3, a, b), a != b) << a << b;
      EXPECT_EQ(g.good(1, 3, a, b), a == b) << a << b;
    }
  }
}

TEST(GoodPairs, CompleteAndEmpty) {
  const GoodPairTable full(Palette::complete(3));
  const GoodPairTable none(Palette::empty(3));
  for (const auto& [i, j] : kPositionPairs) {
    for (Color a = 0; a < 3; ++a) {
      EXPECT_EQ(full.degree(i, j, a), 3u);
      EXPECT_EQ(none.degree(i, j, a), 0u);
      for (Color b = 0; b < 3; ++b) {
        EXPECT_TRUE(full.good(i, j, a, b));
        EXPECT_FALSE(none.good(i, j, a, b));
      }
    }
  }
}

TEST(GoodPairs, MatchesDefinitionOnRandomPalettes) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Palette p = random_palette(rng, 5);
    const GoodPairTable g(p);
    for (const auto& [i, j] : kPositionPairs) {
      for (Color a = 0; a < p.colors(); ++a) {
        EXPECT_EQ(g.degree(i, j, a), oracle::degree(p, i, j, a));
        EXPECT_EQ(g.degree(i, j, a) + g.bad_degree(i, j, a), p.colors());
        for (Color b = 0; b < p.colors(); ++b) {
          EXPECT_EQ(g.good(i, j, a, b), oracle::good(p, i, j, a, b));
          EXPECT_EQ(g.good(i, j, a, b), g.good(j, i, b, a));
        }
      }
    }
  }
}

TEST(RemoveColor, StarFourDropColorTwo) {
  const Palette p(3, oracle::star_triples(4));
  const auto r = remove_color(p, 2);
  std::vector<Triple> expected;
  for (const Triple& t : p.triples())
    if (t[0] != 2 && t[1] != 2 && t[2] != 2) expected.push_back(t);
  EXPECT_EQ(r.palette, Palette(2, expected));
  EXPECT_EQ(r.original_color, (std::vector<Color>{0, 1}));
  EXPECT_FALSE(r.degenerate);
}

TEST(RemoveColor, CompleteStaysComplete) {
  for (Color a = 0; a < 4; ++a) EXPECT_EQ(remove_color(Palette::complete(4), a).palette, Palette::complete(3));
}

TEST(RemoveColor, UnusedColorRaisesDensity) {
  const Palette p(3, {{0, 1, 0}, {1, 0, 1}});
  const auto r = remove_color(p, 2);
  EXPECT_EQ(r.palette.triples(), p.triples());
  EXPECT_GT(density(r.palette), density(p));
}

TEST(RemoveColor, RelabelsContiguously) {
  const Palette p(3, {{0, 2, 2}, {2, 0, 1}, {2, 2, 0}});
  const auto r = remove_color(p, 1);
  EXPECT_EQ(r.palette, Palette(2, {{0, 1, 1}, {1, 1, 0}}));
  EXPECT_EQ(r.original_color, (std::vector<Color>{0, 2}));
}

TEST(RemoveColor, LastColorIsDegenerate) {
  const auto r = remove_color(Palette::complete(1), 0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.palette.colors(), 0u);
  EXPECT_THROW(remove_color(Palette::complete(1), 1), invalid_input);
}

TEST(RemoveColor, TripleCountSplitsByTouchedTriples) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Palette p = random_palette(rng, 6);
    for (Color a = 0; a < p.colors(); ++a) {
      std::size_t touching = 0;
      for (const Triple& t : p.triples()) touching += (t[0] == a || t[1] == a || t[2] == a);
      EXPECT_EQ(p.triples_touching(a), touching);
      EXPECT_EQ(remove_color(p, a).palette.size() + touching, p.size());
    }
  }
}

TEST(MinimalityReduce, DropsUnusedColor) {
  const auto r = minimality_reduce(Palette(3, {{0, 1, 0}, {1, 0, 1}}));
  EXPECT_EQ(r.palette, star3());
  EXPECT_EQ(r.removed, (std::vector<Color>{2}));
}

TEST(MinimalityReduce, StarThreeUnchanged) {
  const auto r = minimality_reduce(star3());
  EXPECT_EQ(r.palette, star3());
  EXPECT_TRUE(r.removed.empty());
  EXPECT_TRUE(is_minimal(star3()));
}

TEST(MinimalityReduce, CompleteGoesToOneColor) {
  const auto r = minimality_reduce(Palette::complete(4));
  EXPECT_EQ(r.palette, Palette::complete(1));
  EXPECT_EQ(r.removed, (std::vector<Color>{0, 1, 2}));
  EXPECT_EQ(r.original_color, (std::vector<Color>{3}));
}

TEST(MinimalityReduce, EmptyPaletteDegenerates) {
  const auto r = minimality_reduce(Palette::empty(3));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.palette.colors(), 0u);
}

TEST(MinimalityReduce, ResultIsMinimalIdempotentAndDenser) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const Palette p = random_palette(rng, 6);
    const auto r = minimality_reduce(p);
    if (r.degenerate) {
      EXPECT_EQ(p.size(), 0u);
      continue;
    }
    EXPECT_GE(density(r.palette), density(p));
    // Every removal strictly lowers the density (zero colors count as density 0).
    for (Color a = 0; a < r.palette.colors(); ++a) {
      const auto smaller = remove_color(r.palette, a);
      const Rational d = smaller.degenerate ? Rational(0) : density(smaller.palette);
      EXPECT_LT(d, density(r.palette));
    }
    EXPECT_EQ(minimality_reduce(r.palette).palette, r.palette);
    // The result is the input restricted to the surviving colors.
    const auto& orig = r.original_color;
    std::size_t inside = 0;
    for (const Triple& t : p.triples()) {
      auto kept = [&](Color c) { return std::find(orig.begin(), orig.end(), c) != orig.end(); };
      inside += kept(t[0]) && kept(t[1]) && kept(t[2]);
    }
    EXPECT_EQ(r.palette.size(), inside);
    for (const Triple& t : r.palette.triples()) EXPECT_TRUE(p.contains({orig[t[0]], orig[t[1]], orig[t[2]]}));
  }
}

TEST(Claim1, OneColorCompleteIsTight) {
  const auto r = verify_claim1(Palette::complete(1));
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.bound, Rational(1));
}

TEST(Claim1, StarThreeVacuous) {
  const auto r = verify_claim1(star3());
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.bound, make_rational(-5, 4));
}

TEST(Claim1, RejectsNonMinimalInputNamingTheColor) {
  try {
    verify_claim1(Palette(3, {{0, 1, 0}, {1, 0, 1}}));
    FAIL() << "expected a precondition error";
  } catch (const invalid_input& e) {
    EXPECT_NE(std::string(e.what()).find("color 2"), std::string::npos) << e.what();
  }
}

TEST(Claim1, HoldsOnFiveHundredReducedRandomPalettes) {
  SplitMix64 rng(1);
  int checked = 0;
  while (checked < 500) {
    const auto r = minimality_reduce(random_palette(rng, 6));
    if (r.degenerate) continue;
    ++checked;
    const auto report = verify_claim1(r.palette);
    ASSERT_TRUE(report.passed) << io::to_json(r.palette).dump();
    // Direct recomputation of the smallest ratio.
    const Rational bound = 3 * oracle::density(r.palette) - 2;
    for (const auto& [i, j] : kPositionPairs)
      for (Color a = 0; a < r.palette.colors(); ++a)
        EXPECT_GE(make_rational(static_cast<long long>(oracle::degree(r.palette, i, j, a)),
                                static_cast<long long>(r.palette.colors())),
                  bound);
  }
}
