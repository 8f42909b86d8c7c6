#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace palette_turan;

namespace {

AdmissionCertificate natural_edge(Color uv, Color uw, Color vw) {
  AdmissionCertificate c;
  c.order = {0, 1, 2};
  c.coloring = {{{0, 1}, uv}, {{0, 2}, uw}, {{1, 2}, vw}};
  return c;
}

// Superset of p with each missing triple added with probability q.
Palette grow(SplitMix64& rng, const Palette& p, double q) {
  std::vector<Triple> ts = p.triples();
  const Color n = static_cast<Color>(p.colors());
  for (Color a = 0; a < n; ++a)
    for (Color b = 0; b < n; ++b)
      for (Color c = 0; c < n; ++c)
        if (!p.contains({a, b, c}) && rng.coin(q)) ts.push_back({a, b, c});
  return Palette(p.colors(), ts);
}

}  // namespace

TEST(CheckCertificate, SingleEdge) {
  const Palette p(3, {{0, 1, 2}});
  EXPECT_TRUE(check_certificate(star(2), p, natural_edge(0, 1, 2)));
  EXPECT_FALSE(check_certificate(star(2), p, natural_edge(0, 1, 0)));
}

TEST(CheckCertificate, MalformedInput) {
  const Palette p(3, {{0, 1, 2}});
  AdmissionCertificate missing = natural_edge(0, 1, 2);
  missing.coloring.erase({1, 2});
  EXPECT_THROW(check_certificate(star(2), p, missing), invalid_input);
  AdmissionCertificate bad_order = natural_edge(0, 1, 2);
  bad_order.order = {0, 0, 2};
  EXPECT_THROW(check_certificate(star(2), p, bad_order), invalid_input);
  EXPECT_THROW(check_certificate(star(2), p, natural_edge(0, 1, 7)), invalid_input);
}

TEST(CheckCertificate, UncoveredPairsMayBeAbsent) {
  const ThreeGraph g(5, {{0, 1, 2}});
  AdmissionCertificate c = natural_edge(0, 1, 2);
  c.order = {0, 1, 2, 3, 4};
  EXPECT_TRUE(check_certificate(g, Palette(3, {{0, 1, 2}}), c));
}

TEST(CheckCertificate, OrderDecidesTriplePositions) {
  const Palette p(3, {{0, 1, 2}});
  AdmissionCertificate c = natural_edge(0, 1, 2);
  c.order = {2, 1, 0};  // now the edge reads (phi(21), phi(20), phi(10)) = (2, 1, 0)
  EXPECT_FALSE(check_certificate(star(2), p, c));
}

TEST(Automorphisms, StarGroupIsSymmetricOnLeaves) {
  EXPECT_EQ(automorphisms(star(3)).size(), 6u);
  EXPECT_EQ(automorphisms(star(4)).size(), 24u);
  EXPECT_EQ(automorphisms(complete_three_graph(4)).size(), 24u);
  EXPECT_EQ(automorphisms(ThreeGraph(4, {{0, 1, 2}})).size(), 6u);
}

TEST(OrderClasses, StarsCollapseToApexPositions) {
  // A single edge (k = 2) has no distinguished apex: all 3! orders are one class.
  EXPECT_EQ(order_classes(star(2)).size(), 1u);
  for (std::size_t k = 3; k <= 6; ++k) {
    const auto classes = order_classes(star(k));
    ASSERT_EQ(classes.size(), k + 1) << k;
    std::set<std::size_t> apex_positions;
    for (const auto& order : classes)
      apex_positions.insert(static_cast<std::size_t>(std::find(order.begin(), order.end(), 0u) - order.begin()));
    EXPECT_EQ(apex_positions.size(), k + 1);
  }
}

TEST(OrderClasses, OrbitSizesAddUp) {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const ThreeGraph g = oracle::random_graph(rng, 2 + rng.below(4), 0.5);
    const auto autos = automorphisms(g);
    const auto classes = order_classes(g);
    std::size_t n_fact = 1;
    for (std::size_t i = 2; i <= g.vertices(); ++i) n_fact *= i;
    // The group acts freely on orders, so every orbit has |Aut| members.
    EXPECT_EQ(classes.size() * autos.size(), n_fact);
    EXPECT_TRUE(std::is_sorted(classes.begin(), classes.end()));
  }
}

TEST(DecideAdmission, StarThreeBlockedByItsPalette) {
  const auto v = decide_admission(star(3), star_palette(3));
  EXPECT_FALSE(v.admits());
  EXPECT_EQ(v.order_classes_searched, 4u);
  EXPECT_EQ(v.order_classes_total, 4u);
}

TEST(DecideAdmission, OneColorCompleteAdmitsEverything) {
  const auto v = decide_admission(star(3), Palette::complete(1));
  ASSERT_TRUE(v.admits());
  for (const auto& [pair, c] : v.certificate->coloring) EXPECT_EQ(c, 0u);
  EXPECT_EQ(v.order_classes_searched, 1u);
}

TEST(DecideAdmission, StarFourAgainstStarThreePalette) {
  const auto general = decide_admission(star(4), star_palette(3));
  const auto digraph = star_admission(star_palette(3), 4);
  EXPECT_EQ(general.admits(), digraph.admits());
  EXPECT_EQ(general.admits(), oracle::admits(star(4), star_palette(3)));
}

TEST(DecideAdmission, BudgetRefusal) {
  EXPECT_THROW(decide_admission(star(8), Palette::complete(1)), budget_exceeded);
  AdmissionOptions big;
  big.max_vertices = 9;
  EXPECT_TRUE(decide_admission(star(8), Palette::complete(1), big).admits());
}

TEST(DecideAdmission, CompletePaletteAlwaysAdmits) {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const ThreeGraph g = oracle::random_graph(rng, 3 + rng.below(4), 0.6);
    EXPECT_TRUE(decide_admission(g, Palette::complete(1 + rng.below(3))).admits());
  }
}

TEST(DecideAdmission, AgreesWithBruteForce) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 120; ++trial) {
    const ThreeGraph g = oracle::random_graph(rng, 3 + rng.below(2), 0.6);
    const Palette p = random_palette(rng, 2);
    const auto v = decide_admission(g, p);
    EXPECT_EQ(v.admits(), oracle::admits(g, p)) << io::to_json(g).dump() << io::to_json(p).dump();
    if (v.admits()) EXPECT_TRUE(check_certificate(g, p, *v.certificate));
  }
}

TEST(DecideAdmission, MonotoneUnderAddingTriples) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const ThreeGraph g = oracle::random_graph(rng, 4 + rng.below(2), 0.5);
    const Palette p = random_palette(rng, 3);
    const Palette bigger = grow(rng, p, 0.3);
    if (decide_admission(g, p).admits()) EXPECT_TRUE(decide_admission(g, bigger).admits());
  }
}

TEST(DecideAdmission, QuotientedMatchesFullEnumeration) {
  SplitMix64 rng(50);
  for (int trial = 0; trial < 50; ++trial) {
    const ThreeGraph g = oracle::random_graph(rng, 3 + rng.below(3), 0.5);
    const Palette p = random_palette(rng, 3);
    AdmissionOptions full;
    full.quotient_by_automorphisms = false;
    const auto q = decide_admission(g, p);
    const auto f = decide_admission(g, p, full);
    EXPECT_EQ(q.admits(), f.admits());
    EXPECT_LE(q.order_classes_total, f.order_classes_total);
  }
}

TEST(DecideAdmission, AgreesWithDigraphRouteOnStars) {
  SplitMix64 rng(200);
  int admitted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Palette p = random_palette(rng, 3);
    const std::size_t k = 2 + rng.below(3);
    const bool general = decide_admission(star(k), p).admits();
    EXPECT_EQ(general, star_admission(p, k).admits()) << k << " " << io::to_json(p).dump();
    admitted += general;
  }
  EXPECT_GT(admitted, 20);
  EXPECT_LT(admitted, 180);
}

TEST(DecideAdmission, ThreadCountDoesNotChangeTheCertificate) {
  SplitMix64 rng(64);
  for (int trial = 0; trial < 40; ++trial) {
    const ThreeGraph g = oracle::random_graph(rng, 5, 0.4);
    const Palette p = random_palette(rng, 3);
    AdmissionOptions many;
    many.threads = 4;
    const auto a = decide_admission(g, p);
    const auto b = decide_admission(g, p, many);
    EXPECT_EQ(a.certificate, b.certificate);
    EXPECT_EQ(a.order_classes_searched, b.order_classes_searched);
  }
}

TEST(AdmitWithOrder, FixedOrderAndColorLimit) {
  const auto cert = admit_with_order(star(2), Palette(3, {{0, 1, 2}}), {2, 0, 1});
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->coloring.at({0, 2}), 0u);
  EXPECT_THROW(admit_with_order(star(2), Palette::empty(65), {0, 1, 2}), budget_exceeded);
}
