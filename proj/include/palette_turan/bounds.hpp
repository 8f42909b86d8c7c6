#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "digraph.hpp"
#include "errors.hpp"
#include "palette.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace palette_turan {

/// Colors 0..k-2, triples (x, y, z) with x != y, y != z and z != x + 1 (mod k - 1).
inline Palette star_palette(std::size_t k) {
  if (k < 3) throw invalid_input("star palette needs k >= 3, got " + std::to_string(k));
  if (k - 1 > Palette::kMaxColors) throw invalid_input("star palette for k = " + std::to_string(k) + " has too many colors");
  const Color n = static_cast<Color>(k - 1);
  std::vector<Triple> triples;
  triples.reserve(static_cast<std::size_t>(n) * (n - 1) * (n - 1));
  for (Color x = 0; x < n; ++x) {
    const Color banned = static_cast<Color>((x + 1) % n);
    for (Color y = 0; y < n; ++y) {
      if (y == x) continue;
      for (Color z = 0; z < n; ++z)
        if (z != y && z != banned) triples.push_back({x, y, z});
    }
  }
  return Palette(n, std::move(triples));
}

/// (k^2 - 5k + 7) / (k - 1)^2
inline Rational star_palette_density_formula(long long k) {
  if (k < 3) throw invalid_input("density formula needs k >= 3");
  return make_rational(k * k - 5 * k + 7, (k - 1) * (k - 1));
}

// ---------------------------------------------------------------------------
// Inclusion-exclusion density bound

struct Lemma3Report {
  Rational density;
  Rational rhs;  // 1/4 + 1/(2n) sum_a sum_{i!=j} (e_ij(a) - 1/2)^2
  bool passed = false;

  // |X1|, |X2|, |X3| and pairwise intersections counted over all of C^3.
  Integer x1, x2, x3, x12, x13, x23;
  Integer inclusion_exclusion_bound;  // n^3 - sum |Xi| + sum |Xi & Xj|
  bool inclusion_exclusion_passed = false;
  bool degree_formulas_agree = false;  // the same counts recomputed from bad degrees
};

inline Lemma3Report verify_lemma3(const Palette& p) {
  const std::size_t n = p.colors();
  if (n == 0) throw invalid_input("inclusion-exclusion bound needs at least one color");
  Lemma3Report r;
  r.density = density(p);

  // Projections of A onto position pairs, straight from the triples.
  std::vector<bool> p23(n * n, false), p13(n * n, false), p12(n * n, false);
  for (const Triple& t : p.triples()) {
    p23[t[1] * n + t[2]] = true;
    p13[t[0] * n + t[2]] = true;
    p12[t[0] * n + t[1]] = true;
  }
  std::size_t c1 = 0, c2 = 0, c3 = 0, c12 = 0, c13 = 0, c23 = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        const bool in1 = !p23[b * n + c];  // no d with (d, b, c) in A
        const bool in2 = !p13[a * n + c];  // no d with (a, d, c) in A
        const bool in3 = !p12[a * n + b];  // no d with (a, b, d) in A
        c1 += in1;
        c2 += in2;
        c3 += in3;
        c12 += in1 && in2;
        c13 += in1 && in3;
        c23 += in2 && in3;
      }
    }
  }
  r.x1 = c1, r.x2 = c2, r.x3 = c3, r.x12 = c12, r.x13 = c13, r.x23 = c23;
  const Integer nn(n);
  r.inclusion_exclusion_bound = nn * nn * nn - r.x1 - r.x2 - r.x3 + r.x12 + r.x13 + r.x23;
  r.inclusion_exclusion_passed = Integer(p.size()) <= r.inclusion_exclusion_bound;

  const GoodPairTable g(p);
  Integer f1 = 0, f2 = 0, f3 = 0, f12 = 0, f13 = 0, f23 = 0;
  Rational squares = 0;
  const Rational half(1, 2);
  for (Color a = 0; a < n; ++a) {
    f1 += nn * g.bad_degree(2, 3, a);
    f2 += nn * g.bad_degree(1, 3, a);
    f3 += nn * g.bad_degree(1, 2, a);
    f12 += Integer(g.bad_degree(3, 1, a)) * g.bad_degree(3, 2, a);
    f13 += Integer(g.bad_degree(2, 1, a)) * g.bad_degree(2, 3, a);
    f23 += Integer(g.bad_degree(1, 2, a)) * g.bad_degree(1, 3, a);
    for (const auto& [i, j] : kPositionPairs) squares += square(g.ratio(i, j, a) - half);
  }
  r.degree_formulas_agree = f1 == r.x1 && f2 == r.x2 && f3 == r.x3 && f12 == r.x12 && f13 == r.x13 && f23 == r.x23;
  r.rhs = Rational(1, 4) + squares / (2 * nn);
  r.passed = r.density <= r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// The local functions of the chain, k fixed.

namespace chain_functions {

inline Rational c_of(long long k) { return make_rational(k - 2, k - 1); }

/// f(x) = (x - 1/2)^2 + 4((k-2)/(k-1) - x)^2
inline Rational f(long long k, const Rational& x) {
  return square(x - Rational(1, 2)) + 4 * square(c_of(k) - x);
}
/// g(x) = 1/2 (x - 1)^2 + 4((k-2)/(k-1) - x/2)^2
inline Rational g(long long k, const Rational& x) {
  return Rational(1, 2) * square(x - 1) + 4 * square(c_of(k) - x / 2);
}
/// f1(x) = f(1 - 1/x)
inline Rational f1(long long k, const Rational& x) { return f(k, 1 - 1 / x); }
/// g1(x) = g(2 - 1/x)
inline Rational g1(long long k, const Rational& x) { return g(k, 2 - 1 / x); }

inline Rational f1_closed(long long k, const Rational& x) {
  const Rational km1(k - 1);
  return 5 / square(x) - Rational(k + 7) / (km1 * x) + 4 / square(km1) + Rational(1, 4);
}
inline Rational g1_closed(long long k, const Rational& x) {
  const Rational km1(k - 1);
  return Rational(3, 2) / square(x) - Rational(k + 3) / (km1 * x) + 4 / square(km1) + Rational(1, 2);
}

inline double f1_double(long long k, double x) {
  const double km1 = static_cast<double>(k - 1);
  return 5.0 / (x * x) - static_cast<double>(k + 7) / (km1 * x) + 4.0 / (km1 * km1) + 0.25;
}

/// Tangent line of f1 at x = k - 1: (k-3)/(k-1)^3 x + (k^2-10k+21)/(2k-2)^2
inline Rational claim3_line(long long k, const Rational& x) {
  return make_rational(k - 3, (k - 1) * (k - 1) * (k - 1)) * x + make_rational(k * k - 10 * k + 21, (2 * k - 2) * (2 * k - 2));
}
/// (4k-12)/(k-1)^3 x + (k^2-10k+21)/(2(k-1)^2)
inline Rational claim4_line(long long k, const Rational& x) {
  return make_rational(4 * k - 12, (k - 1) * (k - 1) * (k - 1)) * x + make_rational(k * k - 10 * k + 21, 2 * (k - 1) * (k - 1));
}

inline Rational claim3_range_start(long long k) { return make_rational(5 * (k - 1), k - 3); }
inline Rational claim4_range_start(long long k) { return make_rational(3 * (k - 1), 2 * k - 6); }

}  // namespace chain_functions

enum class ClaimOutcome { holds, fails, inapplicable };

struct ClaimCheck {
  ClaimOutcome outcome = ClaimOutcome::inapplicable;
  Rational value;     // f1(x) or g1(x)
  Rational line;      // the linear upper bound at x
  Rational factored;  // (x-(k-1))^2((k-3)x-5(k-1)) or (2x-(k-1))^2((2k-6)x-3(k-1))

  bool holds() const { return outcome == ClaimOutcome::holds; }
};

/// f1(x) <= (k-3)/(k-1)^3 x + (k^2-10k+21)/(2k-2)^2 for x >= 5(k-1)/(k-3).
/// Also checks that line - f1 equals the factored cubic over (k-1)^3 x^2.
inline ClaimCheck verify_claim3(long long k, const Rational& x) {
  using namespace chain_functions;
  if (k < 4) throw invalid_input("tangent bound for f1 needs k >= 4");
  ClaimCheck c;
  if (x < claim3_range_start(k)) return c;
  c.value = f1(k, x);
  if (c.value != f1_closed(k, x)) throw invariant_violation("f1 definition and closed form disagree");
  c.line = claim3_line(k, x);
  const Rational km1(k - 1);
  c.factored = square(x - km1) * ((k - 3) * x - 5 * km1);
  if ((c.line - c.value) * km1 * km1 * km1 * square(x) != c.factored)
    throw invariant_violation("f1 tangent bound and its factored form disagree");
  c.outcome = c.value <= c.line ? ClaimOutcome::holds : ClaimOutcome::fails;
  return c;
}

/// g1(x) <= (4k-12)/(k-1)^3 x + (k^2-10k+21)/(2(k-1)^2) for x >= 3(k-1)/(2k-6).
inline ClaimCheck verify_claim4(long long k, const Rational& x) {
  using namespace chain_functions;
  if (k < 4) throw invalid_input("tangent bound for g1 needs k >= 4");
  ClaimCheck c;
  if (x < claim4_range_start(k)) return c;
  c.value = g1(k, x);
  if (c.value != g1_closed(k, x)) throw invariant_violation("g1 definition and closed form disagree");
  c.line = claim4_line(k, x);
  const Rational km1(k - 1);
  c.factored = square(2 * x - km1) * ((2 * k - 6) * x - 3 * km1);
  if ((c.line - c.value) * 2 * km1 * km1 * km1 * square(x) != c.factored)
    throw invariant_violation("g1 tangent bound and its factored form disagree");
  c.outcome = c.value <= c.line ? ClaimOutcome::holds : ClaimOutcome::fails;
  return c;
}

struct Thresholds {
  long long k_star;  // least k with (k-1)^2/(9(k-2)) >= 5(k-1)/(k-3)
  long long k_g;     // least k with (k-1)^2/(18(k-2)) >= 3(k-1)/(2k-6)
};

inline bool f_side_threshold_holds(long long k) {
  return make_rational((k - 1) * (k - 1), 9 * (k - 2)) >= chain_functions::claim3_range_start(k);
}
inline bool g_side_threshold_holds(long long k) {
  return make_rational((k - 1) * (k - 1), 18 * (k - 2)) >= chain_functions::claim4_range_start(k);
}

/// Exact scan from k = 4 (k = 3 zeroes the range denominators).
inline Thresholds thresholds(long long scan_limit = 10000) {
  Thresholds t{0, 0};
  for (long long k = 4; k <= scan_limit && (t.k_star == 0 || t.k_g == 0); ++k) {
    if (t.k_star == 0 && f_side_threshold_holds(k)) t.k_star = k;
    if (t.k_g == 0 && g_side_threshold_holds(k)) t.k_g = k;
  }
  if (t.k_star == 0 || t.k_g == 0) throw invariant_violation("threshold scan did not terminate");
  return t;
}

/// 1/4 + 3(k-3)^2 / (4(k-1)^2) == (k^2-5k+7)/(k-1)^2
inline bool final_identity(long long k) {
  if (k < 2) throw invalid_input("final identity needs k >= 2");
  const Rational lhs = Rational(1, 4) + make_rational(3 * (k - 3) * (k - 3), 4 * (k - 1) * (k - 1));
  return lhs == make_rational(k * k - 5 * k + 7, (k - 1) * (k - 1));
}

// ---------------------------------------------------------------------------
// Per-color statistics and the full inequality chain

struct ColorStat {
  std::array<Rational, 6> e;  // e_{i,j}(a) in kPositionPairs order
  Rational m_a, m_b, m_c, m_d;
  std::optional<Rational> big_a, big_b, big_c, big_d;  // nullopt = infinite (denominator <= 0)
};

/// m_A = max(e23, e32), m_C = max(e12, e21), m_B = m_A + e13, m_D = m_C + e31,
/// M_A = 1/(1-m_A), M_C = 1/(1-m_C), M_B = 1/(2-m_B), M_D = 1/(2-m_D).
inline std::vector<ColorStat> color_stats(const Palette& p) {
  const GoodPairTable g(p);
  std::vector<ColorStat> out(p.colors());
  auto inverse = [](const Rational& denom) -> std::optional<Rational> {
    if (denom <= 0) return std::nullopt;
    return 1 / denom;
  };
  for (Color a = 0; a < p.colors(); ++a) {
    ColorStat& s = out[a];
    for (std::size_t r = 0; r < kPositionPairs.size(); ++r) s.e[r] = g.ratio(kPositionPairs[r].first, kPositionPairs[r].second, a);
    s.m_a = std::max(g.ratio(2, 3, a), g.ratio(3, 2, a));
    s.m_c = std::max(g.ratio(1, 2, a), g.ratio(2, 1, a));
    s.m_b = s.m_a + g.ratio(1, 3, a);
    s.m_d = s.m_c + g.ratio(3, 1, a);
    s.big_a = inverse(1 - s.m_a);
    s.big_c = inverse(1 - s.m_c);
    s.big_b = inverse(2 - s.m_b);
    s.big_d = inverse(2 - s.m_d);
  }
  return out;
}

enum class StepStatus { pass, fail, inapplicable, degenerate };

inline const char* to_string(StepStatus s) {
  switch (s) {
    case StepStatus::pass: return "pass";
    case StepStatus::fail: return "fail";
    case StepStatus::inapplicable: return "inapplicable";
    case StepStatus::degenerate: return "degenerate";
  }
  return "?";
}

struct ChainStep {
  std::string name;
  Rational lhs;
  std::string relation;  // "<=", ">=", "=="
  Rational rhs;
  StepStatus status = StepStatus::inapplicable;
  std::string note;
};

enum class ChainVerdict { bound_holds, violated, inapplicable };

inline const char* to_string(ChainVerdict v) {
  switch (v) {
    case ChainVerdict::bound_holds: return "bound-holds";
    case ChainVerdict::violated: return "violated";
    case ChainVerdict::inapplicable: return "inapplicable";
  }
  return "?";
}

struct ChainReport {
  long long k = 0;
  std::size_t colors = 0;
  Rational density;
  Rational target;  // (k^2-5k+7)/(k-1)^2
  std::optional<std::size_t> max_tt;
  std::vector<ChainStep> steps;
  std::vector<ColorStat> stats;
  ChainVerdict verdict = ChainVerdict::inapplicable;
  bool density_equals_target = false;

  const ChainStep* step(const std::string& name) const {
    for (const auto& s : steps)
      if (s.name == name) return &s;
    return nullptr;
  }
};

namespace detail {

inline StepStatus compare(const Rational& lhs, const std::string& rel, const Rational& rhs) {
  bool ok = false;
  if (rel == "<=") ok = lhs <= rhs;
  else if (rel == ">=") ok = lhs >= rhs;
  else ok = lhs == rhs;
  return ok ? StepStatus::pass : StepStatus::fail;
}

}  // namespace detail

/// Replays the upper-bound argument on one palette in exact arithmetic.
/// Every step records both sides; steps whose hypotheses the palette does not
/// meet are kept but marked inapplicable (or degenerate for infinite M-values),
/// never counted as counterexamples.
inline ChainReport chain_verify(const Palette& p, long long k) {
  using namespace chain_functions;
  if (p.colors() == 0) throw invalid_input("chain needs a palette with at least one color");
  if (k < 2) throw invalid_input("chain needs k >= 2");

  ChainReport rep;
  rep.k = k;
  rep.colors = p.colors();
  rep.density = density(p);
  rep.target = k >= 3 ? star_palette_density_formula(k) : Rational(0);
  rep.stats = color_stats(p);
  const std::size_t n = p.colors();
  const Rational nn(static_cast<long long>(n));
  const Rational km1(k - 1);
  const Rational d = rep.density;
  const Rational half(1, 2);
  auto add = [&](ChainStep s) { rep.steps.push_back(std::move(s)); return rep.steps.size() - 1; };

  // Hypotheses.
  const auto removable = removable_color(p);
  add({"hypothesis: minimal palette", Rational(removable ? 1 : 0), "==", Rational(0),
       removable ? StepStatus::inapplicable : StepStatus::pass,
       removable ? "removing color " + std::to_string(*removable) + " does not decrease the density" : ""});

  std::optional<Rational> sum_ma, sum_mc, sum_mbd;
  bool tt_free = false;
  with_digraph_width(2 * n, [&]<std::size_t W>() {
    const auto built = build_digraph<W>(p);
    if (const auto* l = std::get_if<LoopAdmission>(&built)) {
      add({"hypothesis: loop-free digraph", Rational(1), "==", Rational(0), StepStatus::inapplicable,
           "color " + std::to_string(l->color) + " gives a loop on side " + std::to_string(l->side) +
               "; the palette admits every star"});
      return 0;
    }
    add({"hypothesis: loop-free digraph", Rational(0), "==", Rational(0), StepStatus::pass, ""});
    const auto& dg = std::get<BasicColorDigraph<W>>(built);
    std::vector<std::size_t> side1(n), side2(n);
    for (std::size_t a = 0; a < n; ++a) side1[a] = a, side2[a] = n + a;
    const auto whole = verify_lemma4(dg.graph, static_cast<std::size_t>(k));
    rep.max_tt = whole.max_tt;
    tt_free = whole.applicable;
    add({"hypothesis: no transitive tournament on k vertices", Rational(static_cast<long long>(whole.max_tt)), "<=",
         km1, tt_free ? StepStatus::pass : StepStatus::inapplicable,
         tt_free ? "" : "a transitive tournament on k vertices exists; the palette admits the k-star"});
    if (!tt_free) return 0;
    const auto on1 = verify_lemma4(dg.graph.induced(side1), static_cast<std::size_t>(k));
    const auto on2 = verify_lemma4(dg.graph.induced(side2), static_cast<std::size_t>(k));
    if (!on1.applicable || !on2.applicable) throw invariant_violation("induced subgraph has a larger tournament");
    sum_ma = on1.sum * nn;
    sum_mc = on2.sum * nn;
    sum_mbd = whole.sum * nn;
    if (!on1.passed || !on2.passed || !whole.passed) {
      throw invariant_violation("degree-sum bound fails on a digraph without a transitive tournament on k vertices");
    }
    return 0;
  });

  add({"hypothesis: density at least target", d, ">=", rep.target,
       d >= rep.target ? StepStatus::pass : StepStatus::inapplicable, "extremal regime of the argument"});

  // Degree lower bounds.
  {
    const Rational bound = 3 * d - 2;
    Rational min_e = 1;
    for (const auto& s : rep.stats)
      for (const auto& e : s.e) min_e = std::min(min_e, e);
    add({"claim1: e_ij(a) >= 3d-2", min_e, ">=", bound,
         removable ? StepStatus::inapplicable : detail::compare(min_e, ">=", bound), ""});
    Rational min_ac = 2, min_bd = 3;
    for (const auto& s : rep.stats) {
      min_ac = std::min({min_ac, s.m_a, s.m_c});
      min_bd = std::min({min_bd, s.m_b, s.m_d});
    }
    add({"m_A, m_C >= 3d-2", min_ac, ">=", bound,
         removable ? StepStatus::inapplicable : detail::compare(min_ac, ">=", bound), ""});
    add({"m_B, m_D >= 6d-4", min_bd, ">=", 6 * d - 4,
         removable ? StepStatus::inapplicable : detail::compare(min_bd, ">=", 6 * d - 4), ""});
  }

  // Degenerate M-values name the first offending color.
  std::string degenerate_note;
  for (Color a = 0; a < n && degenerate_note.empty(); ++a) {
    const auto& s = rep.stats[a];
    if (!s.big_a) degenerate_note = "M_A(" + std::to_string(a) + ") is infinite (m_A = 1)";
    else if (!s.big_c) degenerate_note = "M_C(" + std::to_string(a) + ") is infinite (m_C = 1)";
    else if (!s.big_b) degenerate_note = "M_B(" + std::to_string(a) + ") is infinite (m_B = 2)";
    else if (!s.big_d) degenerate_note = "M_D(" + std::to_string(a) + ") is infinite (m_D = 2)";
  }
  const bool degenerate = !degenerate_note.empty();
  const Rational sum_bound = km1 * nn;

  auto sum_step = [&](const std::string& name, const std::optional<Rational>& value) {
    if (degenerate) return add({name, Rational(0), "<=", sum_bound, StepStatus::degenerate, degenerate_note});
    if (!value) return add({name, Rational(0), "<=", sum_bound, StepStatus::inapplicable, "digraph hypotheses fail"});
    return add({name, *value, "<=", sum_bound, detail::compare(*value, "<=", sum_bound), ""});
  };
  if (!degenerate && sum_ma) {
    Rational direct_a = 0, direct_c = 0, direct_bd = 0;
    for (const auto& s : rep.stats) {
      direct_a += *s.big_a;
      direct_c += *s.big_c;
      direct_bd += *s.big_b + *s.big_d;
    }
    if (direct_a != *sum_ma || direct_c != *sum_mc || direct_bd != *sum_mbd)
      throw invariant_violation("M-value sums disagree with the digraph degree sums");
  }
  const std::size_t s1a = sum_step("degree sum M_A <= (k-1)n", sum_ma);
  const std::size_t s1c = sum_step("degree sum M_C <= (k-1)n", sum_mc);
  const std::size_t s2 = sum_step("degree sum M_B + M_D <= (k-1)n", sum_mbd);

  // Inclusion-exclusion bound.
  const Lemma3Report l3 = verify_lemma3(p);
  if (!l3.degree_formulas_agree) throw invariant_violation("inclusion-exclusion counts disagree with bad degrees");
  const std::size_t sl3 = add({"lemma3: d <= 1/4 + (1/2n) sum (e_ij - 1/2)^2", d, "<=", l3.rhs,
                               detail::compare(d, "<=", l3.rhs), ""});

  // Replace the symmetric pairs by their maxima.
  Rational r3 = 0;
  bool pairs_dominated = true;
  for (const auto& s : rep.stats) {
    r3 += 2 * square(s.m_a - half) + square(s.m_b - s.m_a - half);
    r3 += 2 * square(s.m_c - half) + square(s.m_d - s.m_c - half);
    // (x-1/2)^2 + (y-1/2)^2 <= 2(max-1/2)^2 iff x + y >= 1
    const Rational& e12 = s.e[0];
    const Rational& e21 = s.e[2];
    const Rational& e23 = s.e[3];
    const Rational& e32 = s.e[5];
    if (e23 + e32 < 1 || e12 + e21 < 1) pairs_dominated = false;
  }
  r3 = Rational(1, 4) + r3 / (2 * nn);
  const std::size_t s3 = add({"inclusion-exclusion bound <= max-form bound", l3.rhs, "<=", r3,
                              pairs_dominated ? detail::compare(l3.rhs, "<=", r3) : StepStatus::inapplicable,
                              pairs_dominated ? "" : "some e_23 + e_32 or e_12 + e_21 is below 1"});

  // Local step: 2(a-1/2)^2 + (b-a-1/2)^2 = (a-1/2)^2 + 1/2(b-1)^2 + 2(a-b/2)^2 <= f(a) + g(b).
  Rational sum_fg = 0, sum_local = 0;
  auto local = [&](const Rational& a, const Rational& b) {
    const Rational left = 2 * square(a - half) + square(b - a - half);
    const Rational middle = square(a - half) + half * square(b - 1) + 2 * square(a - b / 2);
    if (left != middle) throw invariant_violation("local identity fails");
    sum_local += left;
    sum_fg += f(k, a) + g(k, b);
  };
  for (const auto& s : rep.stats) {
    local(s.m_a, s.m_b);
    local(s.m_c, s.m_d);
  }
  const std::size_t s4 = add({"local inequality summed over colors", sum_local, "<=", sum_fg,
                              detail::compare(sum_local, "<=", sum_fg), ""});

  const Rational r5 = Rational(1, 4) + sum_fg / (2 * nn);
  add({"max-form bound <= 1/4 + (1/2n) sum (f + f + g + g)", r3, "<=", r5, detail::compare(r3, "<=", r5), ""});

  Rational sum_f1a = 0, sum_f1c = 0, sum_g1bd = 0;
  if (!degenerate) {
    for (const auto& s : rep.stats) {
      sum_f1a += f1(k, *s.big_a);
      sum_f1c += f1(k, *s.big_c);
      sum_g1bd += g1(k, *s.big_b) + g1(k, *s.big_d);
    }
    const Rational r5m = Rational(1, 4) + (sum_f1a + sum_f1c + sum_g1bd) / (2 * nn);
    add({"substitution f(m) = f1(M), g(m) = g1(M)", r5, "==", r5m, detail::compare(r5, "==", r5m), ""});
  } else {
    add({"substitution f(m) = f1(M), g(m) = g1(M)", r5, "==", Rational(0), StepStatus::degenerate, degenerate_note});
  }

  // Tangent bounds need every M-value inside the claim ranges.
  auto tangent_step = [&](const std::string& name, const Rational& sum, const Rational& bound, std::size_t sum_step,
                          bool use_claim4, auto member_b, auto member_d) {
    if (degenerate) return add({name, Rational(0), "<=", bound, StepStatus::degenerate, degenerate_note});
    if (k < 4) return add({name, sum, "<=", bound, StepStatus::inapplicable, "needs k >= 4"});
    std::string why;
    for (Color a = 0; a < n && why.empty(); ++a) {
      const auto& s = rep.stats[a];
      for (const Rational* x : {&*(s.*member_b), member_d ? &*(s.*member_d) : nullptr}) {
        if (!x) continue;
        const ClaimCheck c = use_claim4 ? verify_claim4(k, *x) : verify_claim3(k, *x);
        if (c.outcome == ClaimOutcome::inapplicable) {
          why = "M-value of color " + std::to_string(a) + " is below the tangent-bound range";
          break;
        }
        if (c.outcome == ClaimOutcome::fails) throw invariant_violation("tangent bound fails inside its range");
      }
    }
    if (rep.steps[sum_step].status != StepStatus::pass) why = "degree-sum bound not established";
    if (!why.empty()) return add({name, sum, "<=", bound, StepStatus::inapplicable, why});
    return add({name, sum, "<=", bound, detail::compare(sum, "<=", bound), ""});
  };
  using Member = std::optional<Rational> ColorStat::*;
  const Rational bound67 = nn * square(Rational(k - 3) / (2 * km1));
  const Rational bound8 = nn * square(Rational(k - 3) / km1);
  const std::size_t s6 = tangent_step("tangent sum f1(M_A) <= n(k-3)^2/(2k-2)^2", sum_f1a, bound67, s1a, false,
                                      &ColorStat::big_a, Member{nullptr});
  const std::size_t s7 = tangent_step("tangent sum f1(M_C) <= n(k-3)^2/(2k-2)^2", sum_f1c, bound67, s1c, false,
                                      &ColorStat::big_c, Member{nullptr});
  const std::size_t s8 = tangent_step("tangent sum g1(M_B) + g1(M_D) <= n(k-3)^2/(k-1)^2", sum_g1bd, bound8, s2, true,
                                      &ColorStat::big_b, &ColorStat::big_d);

  // Final bound.
  {
    bool applicable = true;
    for (std::size_t idx : {sl3, s3, s4, s6, s7, s8})
      if (rep.steps[idx].status != StepStatus::pass) applicable = false;
    if (k >= 3 && !final_identity(k)) throw invariant_violation("final identity fails");
    const Rational rhs = Rational(1, 4) + (bound67 + bound67 + bound8) / (2 * nn);
    if (k >= 3 && rhs != rep.target) throw invariant_violation("assembled bound differs from the target density");
    add({"final: d(P) <= (k^2-5k+7)/(k-1)^2", d, "<=", rhs,
         applicable ? detail::compare(d, "<=", rhs) : StepStatus::inapplicable,
         applicable ? "" : "an earlier step is not established"});
  }

  rep.density_equals_target = d == rep.target;
  bool any_fail = false;
  for (const auto& s : rep.steps)
    if (s.status == StepStatus::fail) any_fail = true;
  if (any_fail) rep.verdict = ChainVerdict::violated;
  else if (rep.steps.back().status == StepStatus::pass) rep.verdict = ChainVerdict::bound_holds;
  else rep.verdict = ChainVerdict::inapplicable;
  (void)s2;
  return rep;
}

// ---------------------------------------------------------------------------
// Refined threshold for the f1 tangent steps
//
// For fixed k the question is whether every finite family of values x_a >= L(k),
// L(k) = (k-1)^2/(9(k-2)), with mean at most k-1 has mean f1(x_a) at most
// T(k) = (k-3)^2/(2k-2)^2. Maximizing a mean under one linear moment constraint
// is attained on distributions with at most two support points, so it suffices
// to look at two-point profiles: weight w at x1 <= k-1 and 1-w at x2 >= k-1 with
// w x1 + (1-w) x2 = k-1 (or a single point x1 <= k-1).
//
// Both verdicts are exact:
//  * "holds": by duality the bound holds iff some line T + alpha (x - (k-1)),
//    alpha >= 0, dominates f1 on [L, inf). Since f1(k-1) = T this line must be
//    the tangent at k-1. x^2 (line - f1) is a cubic with a double root at k-1;
//    dividing it out leaves a linear factor whose sign on [L, inf) is checked
//    exactly.
//  * "fails": a grid search (double precision, then local refinement) proposes
//    a two-point profile, which is converted to rationals and re-evaluated
//    exactly; only an exact excess over T counts.
// Anything else is "unknown".

struct TwoPointProfile {
  Rational x1, x2, w;  // weight w on x1, 1 - w on x2
};

enum class RefinedStatus { holds, fails, unknown };

inline const char* to_string(RefinedStatus s) {
  switch (s) {
    case RefinedStatus::holds: return "holds";
    case RefinedStatus::fails: return "fails";
    case RefinedStatus::unknown: return "unknown";
  }
  return "?";
}

struct RefinedVerdict {
  long long k = 0;
  RefinedStatus status = RefinedStatus::unknown;
  Rational lower;         // L(k)
  Rational target;        // T(k)
  Rational tangent_root;  // third root 5(k-1)/(k-3) of the tangent cubic
  Rational linear_factor_at_lower;  // sign decides "holds"
  std::optional<TwoPointProfile> best;
  std::optional<Rational> best_excess;  // mean f1 of `best` minus T
  double search_excess = 0;             // double-precision optimum found by the grid
};

struct RefinedResult {
  std::optional<long long> least_holding;
  std::vector<RefinedVerdict> trace;
};

namespace detail {

inline Rational profile_mean_f1(long long k, const TwoPointProfile& prof) {
  return prof.w * chain_functions::f1(k, prof.x1) + (1 - prof.w) * chain_functions::f1(k, prof.x2);
}

// Best two-point profile in double precision: coarse grid over (x1, x2), then
// repeated zooming around the incumbent. Only +, -, *, / are used so that the
// proposed profile is identical on every IEEE-754 platform.
inline std::pair<double, std::pair<double, double>> search_two_point(long long k, double lower, double mean) {
  auto value = [&](double x1, double x2) {
    if (x2 <= mean) return chain_functions::f1_double(k, x1);
    const double w = (x2 - mean) / (x2 - x1);
    return w * chain_functions::f1_double(k, x1) + (1 - w) * chain_functions::f1_double(k, x2);
  };
  const int grid = 200;
  const double x2_max = mean * 1e6;
  double best = -1e300;
  double bx1 = lower, bx2 = mean;
  for (int i = 0; i <= grid; ++i) {
    const double s = static_cast<double>(i) / grid;
    const double x1 = lower + (mean - lower) * s * s;
    for (int j = 0; j <= grid; ++j) {
      const double t = static_cast<double>(j) / grid;
      const double x2 = mean + (x2_max - mean) * t * t * t * t;
      const double v = value(x1, x2);
      if (v > best) best = v, bx1 = x1, bx2 = x2;
    }
  }
  double span1 = (mean - lower) / 10;
  double span2 = 0.5;  // relative half-width around x2
  for (int round = 0; round < 60; ++round) {
    const double c1 = bx1, c2 = bx2;
    for (int i = -10; i <= 10; ++i) {
      const double x1 = std::clamp(c1 + span1 * i / 10, lower, mean);
      for (int j = -10; j <= 10; ++j) {
        const double x2 = std::clamp(c2 * (1 + span2 * j / 10), mean, x2_max);
        const double v = value(x1, x2);
        if (v > best) best = v, bx1 = x1, bx2 = x2;
      }
    }
    span1 *= 0.5;
    span2 *= 0.5;
  }
  return {best, {bx1, bx2}};
}

}  // namespace detail

inline RefinedVerdict refined_verdict(long long k) {
  using namespace chain_functions;
  if (k < 4) throw invalid_input("refined threshold needs k >= 4");
  RefinedVerdict v;
  v.k = k;
  const Rational km1(k - 1);
  v.lower = make_rational((k - 1) * (k - 1), 9 * (k - 2));
  v.target = square(Rational(k - 3) / (2 * km1));
  v.tangent_root = claim3_range_start(k);
  if (v.lower > km1) throw invariant_violation("lower bound above the mean constraint");
  if (f1(k, km1) != v.target) throw invariant_violation("f1(k-1) differs from the target");

  // Dual certificate: x^2 (line(x) - f1(x)) = c3 x^3 + c2 x^2 + c1 x + c0.
  const Rational alpha = -10 / (km1 * km1 * km1) + Rational(k + 7) / (km1 * km1 * km1);
  std::array<Rational, 4> c{Rational(-5), Rational(k + 7) / km1,
                            v.target - alpha * km1 - 4 / square(km1) - Rational(1, 4), alpha};
  // Two synthetic divisions by (x - (k-1)).
  for (int pass = 0; pass < 2; ++pass) {
    const int deg = 3 - pass;
    std::array<Rational, 4> q{};
    Rational carry = 0;
    for (int i = deg; i >= 0; --i) {
      carry = c[i] + carry * km1;
      if (i > 0) q[i - 1] = carry;
    }
    if (carry != 0) throw invariant_violation("tangent point is not a double root");
    c = q;
  }
  // Remaining factor c1 x + c0 with c1 = alpha.
  v.linear_factor_at_lower = c[1] * v.lower + c[0];
  if (alpha >= 0 && c[1] >= 0 && v.linear_factor_at_lower >= 0) v.status = RefinedStatus::holds;

  const auto [excess_value, point] = detail::search_two_point(k, to_double(v.lower), to_double(km1));
  v.search_excess = excess_value - to_double(v.target);
  TwoPointProfile prof;
  prof.x1 = point.first <= to_double(v.lower) ? v.lower : std::max(v.lower, std::min(km1, from_double(point.first)));
  if (point.second <= to_double(km1)) {
    prof.x2 = prof.x1;  // single point, mean x1 <= k-1
    prof.w = 1;
  } else {
    prof.x2 = std::max(km1, from_double(point.second));
    prof.w = prof.x2 == prof.x1 ? Rational(1) : (prof.x2 - km1) / (prof.x2 - prof.x1);
  }
  v.best = prof;
  v.best_excess = detail::profile_mean_f1(k, prof) - v.target;
  if (*v.best_excess > 0) {
    if (v.status == RefinedStatus::holds) throw invariant_violation("refined verdict is both holds and fails");
    v.status = RefinedStatus::fails;
  }
  return v;
}

/// Least k in [k_low, k_high] whose refined verdict is "holds", with the per-k trace.
inline RefinedResult refined_threshold(long long k_low, long long k_high, unsigned threads = 1) {
  if (k_low < 31) throw invalid_input("refined threshold range must start at k >= 31");
  if (k_high < k_low) throw invalid_input("empty refined threshold range");
  RefinedResult r;
  r.trace.resize(static_cast<std::size_t>(k_high - k_low + 1));
  parallel_for(r.trace.size(), threads, [&](std::size_t i) { r.trace[i] = refined_verdict(k_low + static_cast<long long>(i)); });
  for (const auto& v : r.trace) {
    if (v.status == RefinedStatus::holds) {
      r.least_holding = v.k;
      break;
    }
  }
  return r;
}

}  // namespace palette_turan
