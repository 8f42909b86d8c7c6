#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "palette.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace palette_turan {

using Vertex = std::uint32_t;
using Edge = std::array<Vertex, 3>;  // ascending

/// A 3-uniform hypergraph: vertices 0..n-1 and a duplicate-free set of
/// 3-element vertex sets, stored sorted.
class ThreeGraph {
 public:
  ThreeGraph() = default;

  ThreeGraph(std::size_t vertices, std::vector<Edge> edges) : vertices_(vertices), edges_(std::move(edges)) {
    for (Edge& e : edges_) {
      std::sort(e.begin(), e.end());
      if (e[0] == e[1] || e[1] == e[2]) {
        throw invalid_input("edge {" + describe(e) + "} repeats a vertex");
      }
      if (e[2] >= vertices_) {
        throw invalid_input("edge {" + describe(e) + "} uses a vertex >= " + std::to_string(vertices_));
      }
    }
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
      throw invalid_input("duplicate edge {" + describe(*dup) + "}");
    }
    degree_.assign(vertices_, 0);
    for (const Edge& e : edges_)
      for (Vertex v : e) ++degree_[v];
  }

  std::size_t vertices() const { return vertices_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t degree(Vertex v) const { return degree_.at(v); }

  bool has_edge(Vertex a, Vertex b, Vertex c) const {
    Edge e{a, b, c};
    std::sort(e.begin(), e.end());
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  friend bool operator==(const ThreeGraph& x, const ThreeGraph& y) {
    return x.vertices_ == y.vertices_ && x.edges_ == y.edges_;
  }

 private:
  static std::string describe(const Edge& e) {
    return std::to_string(e[0]) + "," + std::to_string(e[1]) + "," + std::to_string(e[2]);
  }

  std::size_t vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> degree_;
};

/// The k-star: apex 0, leaves 1..k, edges {0, i, j} for 1 <= i < j <= k.
inline ThreeGraph star(std::size_t k) {
  if (k < 2) throw invalid_input("star needs k >= 2, got " + std::to_string(k));
  std::vector<Edge> edges;
  for (Vertex i = 1; i <= k; ++i)
    for (Vertex j = i + 1; j <= k; ++j) edges.push_back({0, i, j});
  return ThreeGraph(k + 1, std::move(edges));
}

inline ThreeGraph complete_three_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      for (Vertex c = b + 1; c < n; ++c) edges.push_back({a, b, c});
  return ThreeGraph(n, std::move(edges));
}

/// If `g` is a k-star up to relabeling (k >= 2), returns k and the apex vertex.
inline std::optional<std::pair<std::size_t, Vertex>> as_star(const ThreeGraph& g) {
  if (g.vertices() < 3) return std::nullopt;
  const std::size_t k = g.vertices() - 1;
  if (g.edge_count() != k * (k - 1) / 2) return std::nullopt;
  for (Vertex apex = 0; apex < g.vertices(); ++apex) {
    if (g.degree(apex) != g.edge_count()) continue;
    // Every edge contains the apex and the count matches, so all leaf pairs are present.
    return std::make_pair(k, apex);
  }
  return std::nullopt;
}

/// Pair coloring of the complete graph on n vertices, indexed by unordered pair.
class PairColoring {
 public:
  PairColoring() = default;
  explicit PairColoring(std::size_t n) : n_(n), colors_(n * n, 0) {}

  std::size_t vertices() const { return n_; }
  Color at(Vertex u, Vertex v) const { return colors_[u * n_ + v]; }
  void set(Vertex u, Vertex v, Color c) {
    colors_[u * n_ + v] = c;
    colors_[v * n_ + u] = c;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Color> colors_;
};

struct RodlConstruction {
  ThreeGraph graph;
  PairColoring coloring;
};

/// Random construction from a palette: every pair {i, j} of 0..n-1 gets an
/// independent uniform color, and {i < j < l} is an edge iff
/// (phi(ij), phi(il), phi(jl)) is admissible. Pairs are colored in the order
/// (0,1), (0,2), ..., (n-2,n-1) from a SplitMix64 stream seeded with `seed`.
inline RodlConstruction rodl_construct(const Palette& p, std::size_t n, std::uint64_t seed) {
  if (n < 3) throw invalid_input("construction needs at least 3 vertices");
  if (p.colors() == 0) throw invalid_input("construction needs a palette with at least one color");
  SplitMix64 rng(seed);
  RodlConstruction out{ThreeGraph(), PairColoring(n)};
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) out.coloring.set(i, j, static_cast<Color>(rng.below(p.colors())));
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      for (Vertex l = j + 1; l < n; ++l)
        if (p.contains({out.coloring.at(i, j), out.coloring.at(i, l), out.coloring.at(j, l)}))
          edges.push_back({i, j, l});
  out.graph = ThreeGraph(n, std::move(edges));
  return out;
}

inline constexpr std::size_t kCopySearchMaxPatternVertices = 10;

/// Looks for an injective map pattern -> host carrying every pattern edge onto a
/// host edge. Pattern vertices are assigned in index order and host candidates
/// tried in ascending order, so the injection returned is the lexicographically
/// least one.
inline std::optional<std::vector<Vertex>> contains_copy(const ThreeGraph& host, const ThreeGraph& pattern,
                                                        std::size_t max_pattern_vertices = kCopySearchMaxPatternVertices) {
  if (pattern.vertices() > max_pattern_vertices) {
    throw budget_exceeded("copy search refuses patterns with more than " + std::to_string(max_pattern_vertices) +
                          " vertices (got " + std::to_string(pattern.vertices()) + ")");
  }
  const std::size_t m = pattern.vertices();
  if (m > host.vertices()) return std::nullopt;

  // Edges to check once vertex v is placed: those whose largest vertex is v.
  std::vector<std::vector<Edge>> closing(m);
  for (const Edge& e : pattern.edges()) closing[e[2]].push_back(e);

  std::vector<Vertex> image(m, 0);
  std::vector<bool> used(host.vertices(), false);

  auto place = [&](auto&& self, std::size_t v) -> bool {
    if (v == m) return true;
    for (Vertex h = 0; h < host.vertices(); ++h) {
      if (used[h] || host.degree(h) < pattern.degree(static_cast<Vertex>(v))) continue;
      image[v] = h;
      bool ok = true;
      for (const Edge& e : closing[v]) {
        if (!host.has_edge(image[e[0]], image[e[1]], image[e[2]])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[h] = true;
      if (self(self, v + 1)) return true;
      used[h] = false;
    }
    return false;
  };
  if (place(place, 0)) return image;
  return std::nullopt;
}

struct SubsetDensitySample {
  std::size_t subset_size;
  std::size_t samples;
  Rational min_density;
  Rational mean_density;
};

/// Induced edge density of random vertex subsets of a few sizes (observational only).
inline std::vector<SubsetDensitySample> subset_density_profile(const ThreeGraph& g, std::size_t sample_count,
                                                               std::uint64_t seed) {
  if (g.vertices() < 3) throw invalid_input("subset density profile needs at least 3 vertices");
  const std::size_t n = g.vertices();
  std::vector<std::size_t> sizes;
  for (std::size_t s : {n / 4, n / 2, (3 * n) / 4, n})
    if (s >= 3 && (sizes.empty() || sizes.back() != s)) sizes.push_back(s);

  SplitMix64 rng(seed);
  std::vector<SubsetDensitySample> out;
  for (std::size_t s : sizes) {
    SubsetDensitySample row{s, sample_count, Rational(1), Rational(0)};
    const Integer triples = Integer(s) * (s - 1) * (s - 2) / 6;
    Rational total = 0;
    for (std::size_t t = 0; t < sample_count; ++t) {
      std::vector<Vertex> perm(n);
      for (Vertex v = 0; v < n; ++v) perm[v] = v;
      for (std::size_t i = 0; i < s; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
      std::vector<bool> in(n, false);
      for (std::size_t i = 0; i < s; ++i) in[perm[i]] = true;
      std::size_t inside = 0;
      for (const Edge& e : g.edges())
        if (in[e[0]] && in[e[1]] && in[e[2]]) ++inside;
      Rational d(Integer(inside), triples);
      if (d < row.min_density) row.min_density = d;
      total += d;
    }
    if (sample_count > 0) row.mean_density = total / Integer(sample_count);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace palette_turan
