#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "digraph.hpp"
#include "palette.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace palette_turan {

/// Palette on `colors` colors; each of the colors^3 triples kept with probability p.
inline Palette random_palette(SplitMix64& rng, std::size_t colors, double p) {
  std::vector<Triple> ts;
  for (Color a = 0; a < colors; ++a)
    for (Color b = 0; b < colors; ++b)
      for (Color c = 0; c < colors; ++c)
        if (rng.coin(p)) ts.push_back({a, b, c});
  return Palette(colors, std::move(ts));
}

/// Color count uniform in [1, max_colors], triple probability uniform in [0, 1).
inline Palette random_palette(SplitMix64& rng, std::size_t max_colors) {
  const std::size_t n = 1 + rng.below(max_colors);
  const double p = rng.uniform();
  return random_palette(rng, n, p);
}

/// Loop-free digraph on `vertices` vertices; each ordered pair is an arc with probability p.
template <std::size_t W = 128>
BasicDigraph<W> random_digraph(SplitMix64& rng, std::size_t vertices, double p) {
  BasicDigraph<W> d(vertices);
  for (std::size_t u = 0; u < vertices; ++u)
    for (std::size_t v = 0; v < vertices; ++v)
      if (u != v && rng.coin(p)) d.add_arc(u, v);
  return d;
}

/// lo + a/b with b in [1, 64] and a/b in [0, span].
inline Rational random_rational_at_least(SplitMix64& rng, const Rational& lo, std::uint64_t span) {
  const std::uint64_t den = 1 + rng.below(64);
  const std::uint64_t num = rng.below(span * den + 1);
  return lo + make_rational(static_cast<long long>(num), static_cast<long long>(den));
}

}  // namespace palette_turan
