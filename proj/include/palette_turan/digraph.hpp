#pragma once

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "admit.hpp"
#include "errors.hpp"
#include "hypergraph.hpp"
#include "palette.hpp"
#include "rational.hpp"

namespace palette_turan {

/// Loop-free digraph on at most MaxVertices vertices with out- and in-neighbor bitsets.
template <std::size_t MaxVertices = 128>
class BasicDigraph {
 public:
  using VertexSet = std::bitset<MaxVertices>;
  static constexpr std::size_t kCapacity = MaxVertices;

  BasicDigraph() = default;

  explicit BasicDigraph(std::size_t vertices) : n_(vertices), out_(vertices), in_(vertices) {
    if (vertices > MaxVertices) {
      throw budget_exceeded("digraph on " + std::to_string(vertices) + " vertices exceeds the bitset width " +
                            std::to_string(MaxVertices));
    }
  }

  std::size_t size() const { return n_; }

  void add_arc(std::size_t u, std::size_t v) {
    if (u == v) throw invariant_violation("digraph loop at vertex " + std::to_string(u));
    out_.at(u).set(v);
    in_.at(v).set(u);
  }

  bool has_arc(std::size_t u, std::size_t v) const { return out_[u].test(v); }
  const VertexSet& out(std::size_t v) const { return out_[v]; }
  const VertexSet& in(std::size_t v) const { return in_[v]; }
  std::size_t out_degree(std::size_t v) const { return out_[v].count(); }
  std::size_t in_degree(std::size_t v) const { return in_[v].count(); }

  std::size_t arc_count() const {
    std::size_t total = 0;
    for (const auto& s : out_) total += s.count();
    return total;
  }

  std::vector<std::pair<std::size_t, std::size_t>> arcs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = 0; v < n_; ++v)
        if (out_[u].test(v)) out.emplace_back(u, v);
    return out;
  }

  VertexSet all() const {
    VertexSet s;
    for (std::size_t v = 0; v < n_; ++v) s.set(v);
    return s;
  }

  /// Subgraph induced on `keep` (listed in the new vertex order).
  BasicDigraph induced(const std::vector<std::size_t>& keep) const {
    BasicDigraph sub(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = 0; j < keep.size(); ++j)
        if (i != j && has_arc(keep[i], keep[j])) sub.add_arc(i, j);
    return sub;
  }

 private:
  std::size_t n_ = 0;
  std::vector<VertexSet> out_;
  std::vector<VertexSet> in_;
};

using Digraph = BasicDigraph<128>;

/// The digraph on two copies of the color set: vertex a (side 1) and n + a (side 2).
///   a -> b         iff (a, b) is (2,3)-good
///   n+a -> n+b     iff (a, b) is (1,2)-good
///   a <-> n+b      iff (a, b) is (1,3)-good
template <std::size_t MaxVertices = 128>
struct BasicColorDigraph {
  std::size_t colors = 0;
  BasicDigraph<MaxVertices> graph;

  std::size_t side1(Color a) const { return a; }
  std::size_t side2(Color a) const { return colors + a; }
  bool on_side1(std::size_t v) const { return v < colors; }
  Color color_of(std::size_t v) const { return static_cast<Color>(v < colors ? v : v - colors); }
};

using ColorDigraph = BasicColorDigraph<128>;

/// A good pair (a, a) that would be a loop: the palette admits every star.
struct LoopAdmission {
  Triple triple;  // (b, a, a) for a side-1 loop, (a, a, b) for a side-2 loop
  int side;       // 1 or 2
  Color color;
};

template <std::size_t MaxVertices = 128>
using DigraphBuild = std::variant<BasicColorDigraph<MaxVertices>, LoopAdmission>;

/// Least admissible triple whose entries at positions i and j are a and b.
inline std::optional<Triple> least_triple_with(const Palette& p, int i, Color a, int j, Color b) {
  for (std::size_t t : p.with_color_at(i, a)) {
    const Triple& tr = p.triples()[t];
    if (tr[j - 1] == b) return tr;  // with_color_at lists ascending triples
  }
  return std::nullopt;
}

template <std::size_t MaxVertices = 128>
DigraphBuild<MaxVertices> build_digraph(const Palette& p) {
  const std::size_t n = p.colors();
  if (n == 0) throw invalid_input("digraph needs a palette with at least one color");
  const GoodPairTable good(p);
  for (Color a = 0; a < n; ++a) {
    if (good.good(2, 3, a, a)) return LoopAdmission{*least_triple_with(p, 2, a, 3, a), 1, a};
    if (good.good(1, 2, a, a)) return LoopAdmission{*least_triple_with(p, 1, a, 2, a), 2, a};
  }
  BasicColorDigraph<MaxVertices> d{n, BasicDigraph<MaxVertices>(2 * n)};
  for (Color a = 0; a < n; ++a) {
    for (Color b = 0; b < n; ++b) {
      if (a != b && good.good(2, 3, a, b)) d.graph.add_arc(d.side1(a), d.side1(b));
      if (a != b && good.good(1, 2, a, b)) d.graph.add_arc(d.side2(a), d.side2(b));
      if (good.good(1, 3, a, b)) {
        d.graph.add_arc(d.side1(a), d.side2(b));
        d.graph.add_arc(d.side2(b), d.side1(a));
      }
    }
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = n; v < 2 * n; ++v)
      if (d.graph.has_arc(u, v) != d.graph.has_arc(v, u))
        throw invariant_violation("cross arcs of the color digraph are not paired");
  return d;
}

/// Vertices of a transitive tournament in order: an arc from every earlier to every later vertex.
struct TTWitness {
  std::vector<std::size_t> vertices;
};

struct TTResult {
  std::size_t size = 0;
  TTWitness witness;
};

template <std::size_t W>
bool is_transitive_tournament(const BasicDigraph<W>& d, const std::vector<std::size_t>& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] >= d.size() || seq[j] >= d.size() || !d.has_arc(seq[i], seq[j])) return false;
  return true;
}

namespace detail {

// Branch and bound over chains v1 -> v2 -> ... where each new vertex receives
// arcs from every chosen one. Bound: a transitive tournament is a clique of the
// underlying undirected graph, so a greedy coloring of that graph on the
// candidate set caps the extension.
template <std::size_t W>
class TTSearch {
 public:
  using Set = typename BasicDigraph<W>::VertexSet;

  TTSearch(const BasicDigraph<W>& d, std::size_t cutoff) : d_(d), cutoff_(cutoff) {
    const std::size_t n = d.size();
    undirected_.resize(n);
    for (std::size_t v = 0; v < n; ++v) undirected_[v] = d.out(v) | d.in(v);
    rank_.resize(n);
    for (std::size_t v = 0; v < n; ++v) rank_[v] = v;
    std::stable_sort(rank_.begin(), rank_.end(),
                     [&](std::size_t a, std::size_t b) { return d.out_degree(a) > d.out_degree(b); });
  }

  TTResult run() {
    if (d_.size() == 0) return {};
    best_.clear();
    chain_.clear();
    expand(d_.all());
    return TTResult{best_.size(), TTWitness{best_}};
  }

 private:
  std::size_t color_bound(const Set& candidates) const {
    Set uncolored = candidates;
    std::size_t colors = 0;
    while (uncolored.any()) {
      ++colors;
      Set available = uncolored;
      for (std::size_t v : rank_) {
        if (!available.test(v)) continue;
        uncolored.reset(v);
        available.reset(v);
        available &= ~undirected_[v];
      }
    }
    return colors;
  }

  bool done() const { return best_.size() >= cutoff_; }

  void expand(const Set& candidates) {
    if (chain_.size() > best_.size()) best_ = chain_;
    if (done() || candidates.none()) return;
    const std::size_t bound = chain_.size() + color_bound(candidates);
    if (bound <= best_.size()) return;
    for (std::size_t v : rank_) {
      if (!candidates.test(v)) continue;
      chain_.push_back(v);
      expand(candidates & d_.out(v));
      chain_.pop_back();
      if (done() || bound <= best_.size()) return;
    }
  }

  const BasicDigraph<W>& d_;
  std::size_t cutoff_;
  std::vector<Set> undirected_;
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> chain_;
  std::vector<std::size_t> best_;
};

}  // namespace detail

inline constexpr std::size_t kNoCutoff = static_cast<std::size_t>(-1);

/// Exact maximum transitive tournament, stopping early once `cutoff` vertices are found.
template <std::size_t W>
TTResult max_transitive_tournament(const BasicDigraph<W>& d, std::size_t cutoff = kNoCutoff) {
  TTResult r = detail::TTSearch<W>(d, cutoff).run();
  if (!is_transitive_tournament(d, r.witness.vertices))
    throw invariant_violation("transitive tournament search returned an invalid witness");
  return r;
}

/// Star admission certificate from a loop: a triple (b, a, a) colors leaf pairs b
/// and leaf-apex pairs a with the apex last; (a, a, b) does the same with the apex first.
inline AdmissionCertificate loop_to_certificate(const LoopAdmission& loop, std::size_t k) {
  AdmissionCertificate cert;
  const Vertex apex = 0;
  if (loop.side == 1) {
    for (Vertex v = 1; v <= k; ++v) cert.order.push_back(v);
    cert.order.push_back(apex);
  } else {
    cert.order.push_back(apex);
    for (Vertex v = 1; v <= k; ++v) cert.order.push_back(v);
  }
  const Color leaf_leaf = loop.side == 1 ? loop.triple[0] : loop.triple[2];
  const Color leaf_apex = loop.side == 1 ? loop.triple[1] : loop.triple[0];
  for (Vertex i = 1; i <= k; ++i) {
    cert.coloring[{apex, i}] = leaf_apex;
    for (Vertex j = i + 1; j <= k; ++j) cert.coloring[{i, j}] = leaf_leaf;
  }
  return cert;
}

/// Builds the star admission for a transitive tournament of size k in the color
/// digraph. Side-1 vertices l_1..l_s (in witness order) color the apex pairs of
/// the leaves placed before the apex, side-2 vertices r_1..r_t those after it;
/// the remaining pairs take the least color completing an admissible triple.
template <std::size_t W>
AdmissionCertificate tt_to_certificate(const Palette& p, std::size_t k, const BasicColorDigraph<W>& d,
                                       const TTWitness& w) {
  if (w.vertices.size() != k) {
    throw invariant_violation("witness has " + std::to_string(w.vertices.size()) + " vertices, expected " +
                              std::to_string(k));
  }
  if (!is_transitive_tournament(d.graph, w.vertices))
    throw invariant_violation("witness is not a transitive tournament of the color digraph");
  std::vector<Color> left;
  std::vector<Color> right;
  for (std::size_t v : w.vertices) (d.on_side1(v) ? left : right).push_back(d.color_of(v));
  const std::size_t s = left.size();
  const std::size_t t = right.size();

  auto pick = [&](int i, Color a, int j, Color b, int free) -> Color {
    auto tr = least_triple_with(p, i, a, j, b);
    if (!tr) throw invariant_violation("witness arc without a supporting admissible triple");
    return (*tr)[free - 1];
  };

  // Leaves v_1..v_s are vertices 1..s, w_1..w_t are s+1..s+t, apex is 0.
  const Vertex apex = 0;
  auto v_leaf = [](std::size_t i) { return static_cast<Vertex>(1 + i); };
  auto w_leaf = [s](std::size_t j) { return static_cast<Vertex>(1 + s + j); };

  AdmissionCertificate cert;
  for (std::size_t i = 0; i < s; ++i) cert.order.push_back(v_leaf(i));
  cert.order.push_back(apex);
  for (std::size_t j = 0; j < t; ++j) cert.order.push_back(w_leaf(j));

  for (std::size_t i = 0; i < s; ++i) cert.coloring[{apex, v_leaf(i)}] = left[i];
  for (std::size_t j = 0; j < t; ++j) cert.coloring[{apex, w_leaf(j)}] = right[j];
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j)
      cert.coloring[{v_leaf(i), v_leaf(j)}] = pick(2, left[i], 3, left[j], 1);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < t; ++j)
      cert.coloring[{v_leaf(i), w_leaf(j)}] = pick(1, left[i], 3, right[j], 2);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = i + 1; j < t; ++j)
      cert.coloring[{w_leaf(i), w_leaf(j)}] = pick(1, right[i], 2, right[j], 3);
  return cert;
}

/// Calls fn.template operator()<W>() with the smallest supported bitset width
/// W >= vertices (128, 256 or 512).
template <typename Fn>
decltype(auto) with_digraph_width(std::size_t vertices, Fn&& fn) {
  if (vertices <= 128) return fn.template operator()<128>();
  if (vertices <= 256) return fn.template operator()<256>();
  if (vertices <= 512) return fn.template operator()<512>();
  throw budget_exceeded("digraph on " + std::to_string(vertices) + " vertices exceeds the largest bitset width 512");
}

/// Decides whether star(k) admits p through the color digraph: it does iff the
/// digraph would have a loop or contains a transitive tournament on k vertices.
/// Admitting verdicts carry a checked certificate; the others carry the maximum
/// transitive tournament size.
template <std::size_t W = 128>
AdmissionVerdict star_admission(const Palette& p, std::size_t k) {
  if (k < 2) throw invalid_input("star admission needs k >= 2");
  AdmissionVerdict verdict;
  const auto built = build_digraph<W>(p);
  if (const auto* loop = std::get_if<LoopAdmission>(&built)) {
    verdict.loop_triple = loop->triple;
    verdict.certificate = loop_to_certificate(*loop, k);
  } else {
    const auto& d = std::get<BasicColorDigraph<W>>(built);
    TTResult tt = max_transitive_tournament(d.graph, k);
    verdict.max_transitive_tournament = tt.size;
    if (tt.size >= k) {
      tt.witness.vertices.resize(k);
      verdict.certificate = tt_to_certificate(p, k, d, tt.witness);
    }
  }
  if (verdict.certificate && !check_certificate(star(k), p, *verdict.certificate))
    throw invariant_violation("star admission certificate fails verification");
  return verdict;
}

/// Width-dispatching variant for palettes with more than 64 colors.
inline AdmissionVerdict star_admission_any(const Palette& p, std::size_t k) {
  return with_digraph_width(2 * p.colors(), [&]<std::size_t W>() { return star_admission<W>(p, k); });
}

struct Lemma4Report {
  bool applicable = false;  // false when a transitive tournament on k vertices exists
  bool passed = false;
  Rational sum;             // sum over v of 1 / (N - max(outdeg, indeg))
  Rational bound;           // k - 1
  std::size_t max_tt = 0;
  TTWitness witness;
};

/// Caro-Wei type bound for digraphs without a transitive tournament on k vertices.
template <std::size_t W>
Lemma4Report verify_lemma4(const BasicDigraph<W>& d, std::size_t k) {
  if (k < 2) throw invalid_input("degree-sum bound needs k >= 2");
  Lemma4Report report;
  report.bound = Rational(static_cast<long long>(k) - 1);
  TTResult tt = max_transitive_tournament(d, k);
  report.max_tt = tt.size;
  report.witness = std::move(tt.witness);
  if (tt.size >= k) return report;
  report.applicable = true;
  const Integer n(d.size());
  for (std::size_t v = 0; v < d.size(); ++v) {
    const std::size_t m = std::max(d.out_degree(v), d.in_degree(v));
    report.sum += Rational(Integer(1), n - m);
  }
  report.passed = report.sum <= report.bound;
  return report;
}

template <std::size_t W>
std::string to_dot(const BasicColorDigraph<W>& d) {
  std::ostringstream os;
  os << "digraph D {\n";
  for (std::size_t v = 0; v < d.graph.size(); ++v)
    os << "  " << v << " [label=\"" << d.color_of(v) << (d.on_side1(v) ? "^1" : "^2") << "\"];\n";
  for (const auto& [u, v] : d.graph.arcs()) os << "  " << u << " -> " << v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace palette_turan
