#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "admit.hpp"
#include "bounds.hpp"
#include "digraph.hpp"
#include "errors.hpp"
#include "hypergraph.hpp"
#include "palette.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace palette_turan {

/// Exact admission oracle: the digraph route for stars, the general search otherwise.
inline bool admits(const ThreeGraph& f, const Palette& p, const AdmissionOptions& options = {}) {
  if (auto s = as_star(f)) return star_admission_any(p, s->first).admits();
  return decide_admission(f, p, options).admits();
}

struct ExhaustiveResult {
  std::optional<Rational> best_density;  // nullopt: every palette is admitted
  std::optional<Palette> witness;        // lexicographically least among the densest
  std::size_t palettes_checked = 0;
  std::size_t non_admitting = 0;
};

inline constexpr std::size_t kExhaustiveMaxCells = 12;

/// Densest palette on n colors that f does not admit, over all 2^(n^3) palettes.
/// Admission is decided by the general order-class search.
inline ExhaustiveResult exhaustive_best(const ThreeGraph& f, std::size_t n, const AdmissionOptions& options = {}) {
  if (n == 0) throw invalid_input("exhaustive search needs at least one color");
  const std::size_t cells = n * n * n;
  if (cells > kExhaustiveMaxCells) {
    throw budget_exceeded("exhaustive palette enumeration supports n^3 <= " + std::to_string(kExhaustiveMaxCells) +
                          " (n = " + std::to_string(n) + ")");
  }
  std::vector<Triple> all;
  for (Color a = 0; a < n; ++a)
    for (Color b = 0; b < n; ++b)
      for (Color c = 0; c < n; ++c) all.push_back({a, b, c});

  ExhaustiveResult out;
  std::size_t best_size = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    std::vector<Triple> chosen;
    for (std::size_t i = 0; i < cells; ++i)
      if (mask >> i & 1) chosen.push_back(all[i]);
    const std::size_t size = chosen.size();
    if (out.witness && size < best_size) {
      ++out.palettes_checked;
      continue;  // cannot improve; still counts as enumerated
    }
    Palette p(n, std::move(chosen));
    ++out.palettes_checked;
    if (decide_admission(f, p, options).admits()) continue;
    ++out.non_admitting;
    if (!out.witness || size > best_size || (size == best_size && p < *out.witness)) {
      best_size = size;
      out.witness = std::move(p);
    }
  }
  if (out.witness) out.best_density = density(*out.witness);
  return out;
}

struct SearchTraceEntry {
  std::size_t restart;
  std::size_t iteration;
  std::size_t triples;
  std::string event;
};

struct LocalSearchOptions {
  std::size_t restarts = 4;
  unsigned threads = 1;
  AdmissionOptions admission{};
};

struct LocalSearchResult {
  Rational best_density;
  Palette witness;
  std::vector<SearchTraceEntry> trace;
  std::size_t admission_checks = 0;
};

namespace detail {

struct RestartOutcome {
  std::vector<Triple> best;
  std::vector<SearchTraceEntry> trace;
  std::size_t checks = 0;
};

// The star palette of `k` placed on the first k-1 of n colors, if it fits.
inline std::optional<std::vector<Triple>> structured_seed(const ThreeGraph& f, std::size_t n) {
  const auto s = as_star(f);
  if (!s || s->first < 3 || s->first - 1 > n) return std::nullopt;
  return star_palette(s->first).triples();
}

inline RestartOutcome run_restart(const ThreeGraph& f, std::size_t n, std::size_t iterations, std::size_t restart,
                                  SplitMix64 rng, const LocalSearchOptions& options) {
  RestartOutcome out;
  const std::size_t cells = n * n * n;
  auto cell_of = [n](const Triple& t) { return (t[0] * n + t[1]) * n + t[2]; };
  auto triple_of = [n](std::size_t c) {
    return Triple{static_cast<Color>(c / (n * n)), static_cast<Color>(c / n % n), static_cast<Color>(c % n)};
  };

  std::vector<bool> in(cells, false);
  std::vector<std::size_t> members;
  auto feasible = [&](const std::vector<std::size_t>& cand) {
    std::vector<Triple> ts;
    ts.reserve(cand.size());
    for (std::size_t c : cand) ts.push_back(triple_of(c));
    ++out.checks;
    return !admits(f, Palette(n, std::move(ts)), options.admission);
  };
  auto snapshot = [&] {
    std::vector<Triple> ts;
    for (std::size_t c : members) ts.push_back(triple_of(c));
    std::sort(ts.begin(), ts.end());
    return ts;
  };

  // Even restarts start from the structured seed when there is one.
  if (restart % 2 == 0) {
    if (auto seed = structured_seed(f, n)) {
      std::vector<std::size_t> cand;
      for (const Triple& t : *seed) cand.push_back(cell_of(t));
      if (feasible(cand)) {
        members = cand;
        for (std::size_t c : members) in[c] = true;
      }
    }
  }
  out.best = snapshot();
  out.trace.push_back({restart, 0, members.size(), "start"});

  for (std::size_t it = 1; it <= iterations && members.size() < cells; ++it) {
    std::size_t add = rng.below(cells);
    while (in[add]) add = (add + 1) % cells;
    std::vector<std::size_t> cand = members;
    cand.push_back(add);
    if (feasible(cand)) {
      members = std::move(cand);
      in[add] = true;
      if (members.size() > out.best.size()) {
        out.best = snapshot();
        out.trace.push_back({restart, it, members.size(), "improve"});
      }
      continue;
    }
    if (members.empty()) continue;
    // Plateau move: swap a random member for the rejected triple.
    const std::size_t pos = rng.below(members.size());
    cand = members;
    cand[pos] = add;
    if (feasible(cand)) {
      in[members[pos]] = false;
      in[add] = true;
      members = std::move(cand);
    } else if (rng.coin(0.05)) {
      // Occasional kick: drop a member.
      in[members[pos]] = false;
      members.erase(members.begin() + static_cast<std::ptrdiff_t>(pos));
    }
  }
  return out;
}

}  // namespace detail

/// Seeded hill climbing over add / swap / drop moves that never leaves the set
/// of palettes f does not admit. Heuristic: the result is a certified lower
/// bound witness, not an optimum. Deterministic in (seed, iterations, restarts).
inline LocalSearchResult local_search(const ThreeGraph& f, std::size_t n, std::size_t iterations, std::uint64_t seed,
                                      const LocalSearchOptions& options = {}) {
  if (n == 0) throw invalid_input("local search needs at least one color");
  if (f.edge_count() == 0) throw invalid_input("a graph without edges admits every palette");
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  SplitMix64 master(seed);
  std::vector<SplitMix64> streams;
  for (std::size_t r = 0; r < restarts; ++r) streams.push_back(master.split());

  std::vector<detail::RestartOutcome> outcomes(restarts);
  parallel_for(restarts, options.threads, [&](std::size_t r) {
    outcomes[r] = detail::run_restart(f, n, iterations, r, streams[r], options);
  });

  LocalSearchResult result;
  const std::vector<Triple>* best = nullptr;
  for (const auto& o : outcomes) {
    result.admission_checks += o.checks;
    result.trace.insert(result.trace.end(), o.trace.begin(), o.trace.end());
    if (!best || o.best.size() > best->size() || (o.best.size() == best->size() && o.best < *best)) best = &o.best;
  }
  result.witness = Palette(n, *best);
  if (admits(f, result.witness, options.admission))
    throw invariant_violation("local search witness is admitted on re-verification");
  if (f.vertices() <= options.admission.max_vertices && n <= 64 &&
      decide_admission(f, result.witness, options.admission).admits())
    throw invariant_violation("local search witness is admitted by the general checker");
  result.best_density = density(result.witness);
  return result;
}

}  // namespace palette_turan
