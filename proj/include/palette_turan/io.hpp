#pragma once

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "admit.hpp"
#include "bounds.hpp"
#include "digraph.hpp"
#include "errors.hpp"
#include "hypergraph.hpp"
#include "palette.hpp"
#include "rational.hpp"

namespace palette_turan::io {

using json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1";

// ---------------------------------------------------------------------------
// Rationals: {"num": p, "den": q, "decimal": "..."}; integers that do not fit
// in 64 bits are written as decimal strings.

inline json integer_json(const Integer& v) {
  if (v >= Integer(std::numeric_limits<long long>::min()) && v <= Integer(std::numeric_limits<long long>::max()))
    return v.convert_to<long long>();
  return v.str();
}

inline json to_json(const Rational& r) {
  return json{{"num", integer_json(numerator(r))}, {"den", integer_json(denominator(r))}, {"decimal", to_decimal(r, 12)}};
}

inline Rational rational_from_json(const json& j) {
  auto part = [](const json& v) {
    if (v.is_number_integer()) return Integer(v.get<long long>());
    if (v.is_string()) return Integer(v.get<std::string>());
    throw invalid_input("rational parts must be integers or integer strings");
  };
  const Integer den = part(j.at("den"));
  if (den == 0) throw invalid_input("rational denominator is zero");
  return make_rational(part(j.at("num")), den);
}

// ---------------------------------------------------------------------------
// Palette: {"colors": n, "triples": [[c1,c2,c3], ...]} or text "palette n" + lines.

inline json to_json(const Palette& p) {
  json triples = json::array();
  for (const Triple& t : p.triples()) triples.push_back({t[0], t[1], t[2]});
  return json{{"colors", p.colors()}, {"triples", std::move(triples)}};
}

namespace detail {

inline std::size_t nonnegative(const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw invalid_input(std::string(what) + " must be a nonnegative integer");
  return v.get<std::size_t>();
}

template <std::size_t N>
std::array<std::uint32_t, N> tuple_of(const json& v, const char* what) {
  if (!v.is_array() || v.size() != N) throw invalid_input(std::string(what) + " entries must have " + std::to_string(N) + " integers");
  std::array<std::uint32_t, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<std::uint32_t>(nonnegative(v[i], what));
  return out;
}

// Range-checked before narrowing to Color.
inline Triple color_triple(long long a, long long b, long long c, std::size_t n) {
  for (long long v : {a, b, c})
    if (v < 0 || static_cast<unsigned long long>(v) >= n)
      throw invalid_input("palette color " + std::to_string(v) + " is outside 0.." + std::to_string(n) + "-1");
  return {static_cast<Color>(a), static_cast<Color>(b), static_cast<Color>(c)};
}

}  // namespace detail

inline Palette palette_from_json(const json& j) {
  if (!j.is_object() || !j.contains("colors") || !j.contains("triples"))
    throw invalid_input("palette JSON needs \"colors\" and \"triples\"");
  const std::size_t n = detail::nonnegative(j.at("colors"), "colors");
  std::vector<Triple> triples;
  for (const auto& t : j.at("triples")) {
    const auto raw = detail::tuple_of<3>(t, "triples");
    triples.push_back(detail::color_triple(raw[0], raw[1], raw[2], n));
  }
  return Palette(n, std::move(triples));
}

inline std::string to_text(const Palette& p) {
  std::ostringstream os;
  os << "palette " << p.colors() << "\n";
  for (const Triple& t : p.triples()) os << t[0] << " " << t[1] << " " << t[2] << "\n";
  return os.str();
}

inline Palette palette_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  long long n = -1;
  if (!(is >> header >> n) || header != "palette" || n < 0) throw invalid_input("palette text must start with \"palette n\"");
  std::vector<Triple> triples;
  long long a, b, c;
  while (is >> a >> b >> c) triples.push_back(detail::color_triple(a, b, c, static_cast<std::size_t>(n)));
  if (!is.eof()) throw invalid_input("palette text has a malformed triple line");
  return Palette(static_cast<std::size_t>(n), std::move(triples));
}

// ---------------------------------------------------------------------------
// 3-graph: {"vertices": n, "edges": [[a,b,c], ...]} or text "graph n" + lines.

inline json to_json(const ThreeGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e[0], e[1], e[2]});
  return json{{"vertices", g.vertices()}, {"edges", std::move(edges)}};
}

inline ThreeGraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw invalid_input("graph JSON needs \"vertices\" and \"edges\"");
  const std::size_t n = detail::nonnegative(j.at("vertices"), "vertices");
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) edges.push_back(detail::tuple_of<3>(e, "edges"));
  return ThreeGraph(n, std::move(edges));
}

inline std::string to_text(const ThreeGraph& g) {
  std::ostringstream os;
  os << "graph " << g.vertices() << "\n";
  for (const Edge& e : g.edges()) os << e[0] << " " << e[1] << " " << e[2] << "\n";
  return os.str();
}

inline ThreeGraph graph_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  long long n = -1;
  if (!(is >> header >> n) || header != "graph" || n < 0) throw invalid_input("graph text must start with \"graph n\"");
  std::vector<Edge> edges;
  long long a, b, c;
  while (is >> a >> b >> c) {
    if (a < 0 || b < 0 || c < 0) throw invalid_input("graph vertices must be nonnegative");
    edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c)});
  }
  if (!is.eof()) throw invalid_input("graph text has a malformed edge line");
  return ThreeGraph(static_cast<std::size_t>(n), std::move(edges));
}

// ---------------------------------------------------------------------------
// Files: JSON when the first non-space character is '{', text otherwise.

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool looks_like_json(const std::string& text) {
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
  return false;
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw invalid_input("malformed " + what + " JSON: " + e.what());
  }
}

inline Palette parse_palette(const std::string& text) {
  if (looks_like_json(text)) {
    try {
      return palette_from_json(parse_json(text, "palette"));
    } catch (const json::exception& e) {
      throw invalid_input(std::string("malformed palette JSON: ") + e.what());
    }
  }
  return palette_from_text(text);
}

inline ThreeGraph parse_graph(const std::string& text) {
  if (looks_like_json(text)) {
    try {
      return graph_from_json(parse_json(text, "graph"));
    } catch (const json::exception& e) {
      throw invalid_input(std::string("malformed graph JSON: ") + e.what());
    }
  }
  return graph_from_text(text);
}

inline Palette read_palette(const std::string& path) { return parse_palette(read_file(path)); }
inline ThreeGraph read_graph(const std::string& path) { return parse_graph(read_file(path)); }

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// Certificates, verdicts, digraphs, reports

inline json to_json(const AdmissionCertificate& c) {
  json coloring = json::array();
  for (const auto& [pair, color] : c.coloring) coloring.push_back({pair.first, pair.second, color});
  return json{{"order", c.order}, {"coloring", std::move(coloring)}};
}

inline AdmissionCertificate certificate_from_json(const json& j) {
  AdmissionCertificate c;
  for (const auto& v : j.at("order")) c.order.push_back(static_cast<Vertex>(detail::nonnegative(v, "order")));
  for (const auto& e : j.at("coloring")) {
    const auto t = detail::tuple_of<3>(e, "coloring");
    if (t[2] > Palette::kMaxColors) throw invalid_input("certificate color " + std::to_string(t[2]) + " is out of range");
    c.coloring[make_pair_key(t[0], t[1])] = static_cast<Color>(t[2]);
  }
  return c;
}

inline json to_json(const AdmissionVerdict& v) {
  json out{{"admits", v.admits()},
           {"certificate", v.certificate ? to_json(*v.certificate) : json(nullptr)},
           {"orderClassesSearched", v.order_classes_searched}};
  if (v.order_classes_total) out["orderClassesTotal"] = v.order_classes_total;
  if (v.max_transitive_tournament) out["maxTransitiveTournament"] = *v.max_transitive_tournament;
  if (v.loop_triple) out["loopTriple"] = {(*v.loop_triple)[0], (*v.loop_triple)[1], (*v.loop_triple)[2]};
  return out;
}

template <std::size_t W>
json to_json(const BasicColorDigraph<W>& d) {
  json arcs = json::array();
  for (const auto& [u, v] : d.graph.arcs()) arcs.push_back({u, v});
  return json{{"n", d.colors},
              {"vertices", d.graph.size()},
              {"vertexConvention", "color a on side 1 is vertex a, on side 2 vertex n + a"},
              {"arcs", std::move(arcs)}};
}

template <std::size_t W>
json to_json(const BasicDigraph<W>& d) {
  json arcs = json::array();
  for (const auto& [u, v] : d.arcs()) arcs.push_back({u, v});
  return json{{"n", d.size()}, {"arcs", std::move(arcs)}};
}

inline Digraph digraph_from_json(const json& j) {
  const std::size_t n = detail::nonnegative(j.at("n"), "n");
  Digraph d(n);
  for (const auto& a : j.at("arcs")) {
    const auto arc = detail::tuple_of<2>(a, "arcs");
    if (arc[0] >= n || arc[1] >= n) throw invalid_input("arc endpoint out of range");
    if (arc[0] == arc[1]) throw invalid_input("digraph loops are not allowed");
    d.add_arc(arc[0], arc[1]);
  }
  return d;
}

inline json to_json(const ChainReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    json step{{"name", s.name}, {"lhs", to_json(s.lhs)}, {"relation", s.relation}, {"rhs", to_json(s.rhs)},
              {"status", to_string(s.status)}};
    if (!s.note.empty()) step["note"] = s.note;
    steps.push_back(std::move(step));
  }
  json colors = json::array();
  for (std::size_t a = 0; a < r.stats.size(); ++a) {
    const auto& s = r.stats[a];
    auto big = [](const std::optional<Rational>& v) { return v ? to_json(*v) : json("infinite"); };
    colors.push_back({{"color", a},
                      {"m_A", to_json(s.m_a)},
                      {"m_B", to_json(s.m_b)},
                      {"m_C", to_json(s.m_c)},
                      {"m_D", to_json(s.m_d)},
                      {"M_A", big(s.big_a)},
                      {"M_B", big(s.big_b)},
                      {"M_C", big(s.big_c)},
                      {"M_D", big(s.big_d)}});
  }
  json out{{"k", r.k},
           {"colors", r.colors},
           {"density", to_json(r.density)},
           {"target", to_json(r.target)},
           {"densityEqualsTarget", r.density_equals_target},
           {"verdict", to_string(r.verdict)},
           {"steps", std::move(steps)},
           {"colorStats", std::move(colors)}};
  out["maxTransitiveTournament"] = r.max_tt ? json(*r.max_tt) : json(nullptr);
  return out;
}

inline json to_json(const RefinedVerdict& v) {
  json out{{"k", v.k},
           {"status", to_string(v.status)},
           {"lower", to_json(v.lower)},
           {"target", to_json(v.target)},
           {"tangentRoot", to_json(v.tangent_root)},
           {"linearFactorAtLower", to_json(v.linear_factor_at_lower)}};
  if (v.best) {
    out["bestProfile"] = {{"x1", to_json(v.best->x1)}, {"x2", to_json(v.best->x2)}, {"w", to_json(v.best->w)}};
  }
  if (v.best_excess) out["bestExcess"] = to_json(*v.best_excess);
  return out;
}

inline json to_json(const RefinedResult& r) {
  json trace = json::array();
  for (const auto& v : r.trace) trace.push_back(to_json(v));
  return json{{"leastHolding", r.least_holding ? json(*r.least_holding) : json(nullptr)}, {"trace", std::move(trace)}};
}

}  // namespace palette_turan::io
