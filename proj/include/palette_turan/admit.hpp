#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hypergraph.hpp"
#include "palette.hpp"
#include "parallel.hpp"

namespace palette_turan {

using VertexPair = std::pair<Vertex, Vertex>;  // first < second

inline VertexPair make_pair_key(Vertex u, Vertex v) { return u < v ? VertexPair{u, v} : VertexPair{v, u}; }

/// A vertex order (order[position] = vertex) and colors for the vertex pairs
/// that lie in at least one edge. Other pairs are unconstrained and may be absent.
struct AdmissionCertificate {
  std::vector<Vertex> order;
  std::map<VertexPair, Color> coloring;

  friend bool operator==(const AdmissionCertificate&, const AdmissionCertificate&) = default;
};

/// Outcome of an admission decision. `certificate` is engaged iff the graph
/// admits the palette; the remaining fields are the evidence behind the verdict.
struct AdmissionVerdict {
  std::optional<AdmissionCertificate> certificate;
  std::size_t order_classes_searched = 0;
  std::size_t order_classes_total = 0;
  std::optional<std::size_t> max_transitive_tournament;  // digraph route
  std::optional<Triple> loop_triple;                     // digraph route, loop case

  bool admits() const { return certificate.has_value(); }
};

/// True iff every edge u < v < w (positions under cert.order) has
/// (phi(uv), phi(uw), phi(vw)) admissible.
inline bool check_certificate(const ThreeGraph& f, const Palette& p, const AdmissionCertificate& cert) {
  const std::size_t n = f.vertices();
  if (cert.order.size() != n) {
    throw invalid_input("certificate order has " + std::to_string(cert.order.size()) + " vertices, graph has " +
                        std::to_string(n));
  }
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex v = cert.order[i];
    if (v >= n || position[v] != n) throw invalid_input("certificate order is not a permutation of the vertices");
    position[v] = i;
  }
  auto color_of = [&](Vertex a, Vertex b) {
    auto it = cert.coloring.find(make_pair_key(a, b));
    if (it == cert.coloring.end()) {
      throw invalid_input("malformed certificate: pair {" + std::to_string(std::min(a, b)) + "," +
                          std::to_string(std::max(a, b)) + "} lies in an edge but has no color");
    }
    if (it->second >= p.colors()) throw invalid_input("certificate uses a color outside the palette");
    return it->second;
  };
  for (const Edge& e : f.edges()) {
    Edge byPos = e;
    std::sort(byPos.begin(), byPos.end(), [&](Vertex a, Vertex b) { return position[a] < position[b]; });
    const auto [u, v, w] = byPos;
    if (!p.contains({color_of(u, v), color_of(u, w), color_of(v, w)})) return false;
  }
  return true;
}

namespace detail {

inline std::vector<std::vector<Vertex>> all_permutations(std::size_t n) {
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::vector<std::vector<Vertex>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Lehmer-code rank of a permutation of 0..n-1.
inline std::size_t permutation_rank(const std::vector<Vertex>& perm) {
  const std::size_t n = perm.size();
  std::size_t rank = 0;
  std::uint32_t seen = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t below = perm[i] == 0 ? 0 : (seen & ((1u << perm[i]) - 1));
    const std::size_t smaller_unused = perm[i] - static_cast<std::size_t>(__builtin_popcount(below));
    rank = rank * (n - i) + smaller_unused;
    seen |= 1u << perm[i];
  }
  return rank;
}

}  // namespace detail

/// Vertex permutations mapping the edge set onto itself, by brute force.
inline std::vector<std::vector<Vertex>> automorphisms(const ThreeGraph& f) {
  std::vector<std::vector<Vertex>> out;
  for (auto& perm : detail::all_permutations(f.vertices())) {
    bool ok = true;
    for (const Edge& e : f.edges()) {
      if (!f.has_edge(perm[e[0]], perm[e[1]], perm[e[2]])) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(perm));
  }
  return out;
}

/// One representative per orbit of vertex orders under the automorphism group
/// (acting by relabeling), each the lexicographically least in its orbit,
/// listed in increasing order.
inline std::vector<std::vector<Vertex>> order_classes(const ThreeGraph& f) {
  const auto autos = automorphisms(f);
  auto perms = detail::all_permutations(f.vertices());
  std::vector<bool> seen(perms.size(), false);
  std::vector<std::vector<Vertex>> reps;
  std::vector<Vertex> image(f.vertices());
  for (auto& order : perms) {
    if (seen[detail::permutation_rank(order)]) continue;
    for (const auto& pi : autos) {
      for (std::size_t i = 0; i < order.size(); ++i) image[i] = pi[order[i]];
      seen[detail::permutation_rank(image)] = true;
    }
    reps.push_back(order);
  }
  return reps;
}

/// Every vertex order, for cross-checking the quotiented enumeration.
inline std::vector<std::vector<Vertex>> all_orders(const ThreeGraph& f) {
  return detail::all_permutations(f.vertices());
}

namespace detail {

// Pair-coloring constraint problem for one fixed vertex order. Variables are the
// pairs covered by edges, domains are color bitmasks, each edge is a ternary
// constraint over (phi(uv), phi(uw), phi(vw)).
class OrderColoringSolver {
 public:
  using Domain = std::uint64_t;

  OrderColoringSolver(const ThreeGraph& f, const Palette& p, const std::vector<Vertex>& order)
      : palette_(p), order_(order) {
    std::vector<std::size_t> position(f.vertices());
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    std::map<VertexPair, std::size_t> var_of;
    auto var = [&](Vertex a, Vertex b) {
      auto key = make_pair_key(a, b);
      auto [it, inserted] = var_of.emplace(key, pairs_.size());
      if (inserted) pairs_.push_back(key);
      return it->second;
    };
    for (const Edge& e : f.edges()) {
      Edge byPos = e;
      std::sort(byPos.begin(), byPos.end(), [&](Vertex a, Vertex b) { return position[a] < position[b]; });
      constraints_.push_back({var(byPos[0], byPos[1]), var(byPos[0], byPos[2]), var(byPos[1], byPos[2])});
    }
    watchers_.assign(pairs_.size(), {});
    for (std::size_t c = 0; c < constraints_.size(); ++c)
      for (std::size_t v : constraints_[c]) watchers_[v].push_back(c);
  }

  std::optional<AdmissionCertificate> solve() const {
    const std::size_t n = palette_.colors();
    const Domain full = n == 64 ? ~Domain{0} : ((Domain{1} << n) - 1);
    std::vector<Domain> domains(pairs_.size(), full);
    std::vector<std::size_t> all(constraints_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (!propagate(domains, all)) return std::nullopt;
    if (!search(domains)) return std::nullopt;
    AdmissionCertificate cert;
    cert.order = order_;
    for (std::size_t v = 0; v < pairs_.size(); ++v)
      cert.coloring[pairs_[v]] = static_cast<Color>(__builtin_ctzll(domains[v]));
    return cert;
  }

 private:
  // Generalized arc consistency by support counting over the admissible triples.
  bool propagate(std::vector<Domain>& domains, std::vector<std::size_t> queue) const {
    std::vector<bool> queued(constraints_.size(), false);
    for (std::size_t c : queue) queued[c] = true;
    while (!queue.empty()) {
      const std::size_t c = queue.back();
      queue.pop_back();
      queued[c] = false;
      const auto& vars = constraints_[c];
      Domain supported[3] = {0, 0, 0};
      for (const Triple& t : palette_.triples()) {
        if ((domains[vars[0]] >> t[0] & 1) && (domains[vars[1]] >> t[1] & 1) && (domains[vars[2]] >> t[2] & 1)) {
          supported[0] |= Domain{1} << t[0];
          supported[1] |= Domain{1} << t[1];
          supported[2] |= Domain{1} << t[2];
        }
      }
      for (int k = 0; k < 3; ++k) {
        const Domain narrowed = domains[vars[k]] & supported[k];
        if (narrowed == 0) return false;
        if (narrowed != domains[vars[k]]) {
          domains[vars[k]] = narrowed;
          for (std::size_t other : watchers_[vars[k]]) {
            if (other != c && !queued[other]) {
              queued[other] = true;
              queue.push_back(other);
            }
          }
        }
      }
    }
    return true;
  }

  bool search(std::vector<Domain>& domains) const {
    std::size_t best = pairs_.size();
    int best_size = 65;
    for (std::size_t v = 0; v < pairs_.size(); ++v) {
      const int size = __builtin_popcountll(domains[v]);
      if (size > 1 && size < best_size) {
        best_size = size;
        best = v;
      }
    }
    if (best == pairs_.size()) return true;
    for (Domain rest = domains[best]; rest != 0; rest &= rest - 1) {
      const Domain value = rest & (~rest + 1);
      std::vector<Domain> trial = domains;
      trial[best] = value;
      if (propagate(trial, watchers_[best]) && search(trial)) {
        domains = std::move(trial);
        return true;
      }
    }
    return false;
  }

  const Palette& palette_;
  std::vector<Vertex> order_;
  std::vector<VertexPair> pairs_;
  std::vector<std::array<std::size_t, 3>> constraints_;
  std::vector<std::vector<std::size_t>> watchers_;
};

}  // namespace detail

/// Searches a single vertex order for an admissible pair coloring.
inline std::optional<AdmissionCertificate> admit_with_order(const ThreeGraph& f, const Palette& p,
                                                           const std::vector<Vertex>& order) {
  if (p.colors() > 64) throw budget_exceeded("general admission search supports at most 64 colors");
  return detail::OrderColoringSolver(f, p, order).solve();
}

struct AdmissionOptions {
  std::size_t max_vertices = 8;
  unsigned threads = 1;
  bool quotient_by_automorphisms = true;
};

/// Exact decision of whether `f` admits `p`: one constraint search per vertex
/// order class. The certificate returned comes from the lexicographically least
/// admitting class, independent of the number of threads.
inline AdmissionVerdict decide_admission(const ThreeGraph& f, const Palette& p, const AdmissionOptions& options = {}) {
  if (f.vertices() > options.max_vertices) {
    throw budget_exceeded("admission search enumerates vertex orders only up to " +
                          std::to_string(options.max_vertices) + " vertices (graph has " +
                          std::to_string(f.vertices()) + ")");
  }
  if (p.colors() > 64) throw budget_exceeded("general admission search supports at most 64 colors");
  const auto classes = options.quotient_by_automorphisms ? order_classes(f) : all_orders(f);

  AdmissionVerdict verdict;
  verdict.order_classes_total = classes.size();
  std::atomic<std::size_t> first_hit{classes.size()};
  std::vector<std::optional<AdmissionCertificate>> found(classes.size());
  parallel_for(classes.size(), options.threads, [&](std::size_t i) {
    if (i > first_hit.load()) return;
    found[i] = admit_with_order(f, p, classes[i]);
    if (found[i]) {
      std::size_t cur = first_hit.load();
      while (i < cur && !first_hit.compare_exchange_weak(cur, i)) {
      }
    }
  });
  const std::size_t hit = first_hit.load();
  if (hit < classes.size()) {
    verdict.certificate = std::move(found[hit]);
    verdict.order_classes_searched = hit + 1;
    if (!check_certificate(f, p, *verdict.certificate)) {
      throw invariant_violation("admission search produced a certificate that fails verification");
    }
  } else {
    verdict.order_classes_searched = classes.size();
  }
  return verdict;
}

}  // namespace palette_turan
