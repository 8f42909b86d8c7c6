#pragma once

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <palette_turan/palette_turan.hpp>

namespace palette_turan::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kBudget = 2, kInvariant = 3 };

namespace detail {

inline bool is_rational(const json& j) {
  return j.is_object() && j.size() == 3 && j.contains("num") && j.contains("den") && j.contains("decimal");
}

inline std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (is_rational(j)) {
    const std::string num = j["num"].is_string() ? j["num"].get<std::string>() : j["num"].dump();
    const std::string den = j["den"].is_string() ? j["den"].get<std::string>() : j["den"].dump();
    if (den == "1") return num;
    return num + "/" + den + " (≈ " + j["decimal"].get<std::string>() + ")";
  }
  return j.dump();
}

inline bool is_flat(const json& j) {
  if (!j.is_array()) return false;
  return std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive() || (e.is_array() && e.size() <= 3 && std::all_of(e.begin(), e.end(), [](const json& x) { return x.is_primitive(); })); });
}

inline void render(const json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object() && !is_rational(j)) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_primitive() || is_rational(value) || (is_flat(value) && value.dump().size() <= 100)) {
        out << pad << key << ": " << (value.is_array() ? value.dump() : scalar_text(value)) << "\n";
      } else {
        out << pad << key << ":\n";
        render(value, out, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const json& value = j[i];
      if (value.is_primitive() || is_rational(value) || is_flat(value)) {
        out << pad << "- " << (value.is_array() ? value.dump() : scalar_text(value)) << "\n";
      } else {
        out << pad << "- [" << i << "]\n";
        render(value, out, indent + 2);
      }
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Closest long option or subcommand name of the deepest parsed command.
inline std::optional<std::string> suggest(const CLI::App& app, const std::string& token) {
  const CLI::App* cur = &app;
  for (;;) {
    auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
  }
  std::vector<std::string> names;
  for (const CLI::App* a = cur; a != nullptr; a = a->get_parent()) {
    for (const CLI::Option* opt : a->get_options())
      for (const auto& l : opt->get_lnames()) names.push_back("--" + l);
  }
  for (const CLI::App* sub : cur->get_subcommands([](const CLI::App*) { return true; })) names.push_back(sub->get_name());
  std::optional<std::string> best;
  std::size_t best_d = 3;
  for (const auto& n : names) {
    const std::size_t d = edit_distance(token, n);
    if (d < best_d) {
      best_d = d;
      best = n;
    }
  }
  return best;
}

// Bare words that are close to, but not exactly, some subcommand name.
inline std::vector<std::pair<std::string, std::string>> misspelled_subcommands(const CLI::App& app,
                                                                                const std::vector<std::string>& args) {
  std::vector<std::string> names;
  std::vector<const CLI::App*> stack{&app};
  while (!stack.empty()) {
    const CLI::App* a = stack.back();
    stack.pop_back();
    for (const CLI::App* sub : a->get_subcommands([](const CLI::App*) { return true; })) {
      names.push_back(sub->get_name());
      stack.push_back(sub);
    }
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& token : args) {
    if (token.empty() || token[0] == '-' || std::find(names.begin(), names.end(), token) != names.end()) continue;
    for (const auto& name : names) {
      if (edit_distance(token, name) <= 2) {
        out.emplace_back(token, name);
        break;
      }
    }
  }
  return out;
}

inline std::vector<std::string> unexpected_tokens(const std::string& message) {
  std::vector<std::string> out;
  const auto colon = message.rfind(':');
  if (colon == std::string::npos) return out;
  std::istringstream is(message.substr(colon + 1));
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline void save_palette(const std::string& path, const Palette& p) {
  io::write_file(path, ends_with(path, ".txt") ? io::to_text(p) : io::to_json(p).dump() + "\n");
}

inline void save_graph(const std::string& path, const ThreeGraph& g) {
  io::write_file(path, ends_with(path, ".txt") ? io::to_text(g) : io::to_json(g).dump() + "\n");
}

inline json triple_json(const Triple& t) { return json::array({t[0], t[1], t[2]}); }

}  // namespace detail

/// Everything a command needs besides its own flags.
struct Context {
  bool json_mode = false;
  unsigned threads = 1;
};

namespace commands {

inline json palette_info(const Palette& p) {
  const GoodPairTable g(p);
  json degrees = json::array();
  for (Color a = 0; a < p.colors(); ++a) {
    json row{{"color", a}};
    for (const auto& [i, j] : kPositionPairs) row["d" + std::to_string(i) + std::to_string(j)] = g.degree(i, j, a);
    degrees.push_back(std::move(row));
  }
  json out{{"colors", p.colors()}, {"triples", p.size()}, {"degrees", std::move(degrees)}};
  if (p.colors() > 0) out["density"] = io::to_json(density(p));
  const auto removable = p.colors() > 0 ? removable_color(p) : std::nullopt;
  out["minimal"] = p.colors() > 0 && !removable;
  out["removableColor"] = removable ? json(*removable) : json(nullptr);
  return out;
}

inline json reduce(const Palette& p) {
  const auto r = minimality_reduce(p);
  json out{{"inputColors", p.colors()},
           {"removed", r.removed},
           {"originalColor", r.original_color},
           {"degenerate", r.degenerate},
           {"palette", io::to_json(r.palette)}};
  if (p.colors() > 0) out["inputDensity"] = io::to_json(density(p));
  out["density"] = r.degenerate ? json(io::to_json(Rational(0))) : io::to_json(density(r.palette));
  return out;
}

inline json remove(const Palette& p, Color a) {
  const auto r = remove_color(p, a);
  json out{{"removedColor", a}, {"originalColor", r.original_color}, {"degenerate", r.degenerate},
           {"palette", io::to_json(r.palette)}};
  if (!r.degenerate) out["density"] = io::to_json(density(r.palette));
  return out;
}

inline json graph_info(const ThreeGraph& g) {
  json out{{"vertices", g.vertices()}, {"edges", g.edge_count()}};
  if (auto s = as_star(g)) out["star"] = {{"k", s->first}, {"apex", s->second}};
  else out["star"] = nullptr;
  if (g.vertices() <= 8) {
    out["automorphisms"] = automorphisms(g).size();
    out["orderClasses"] = order_classes(g).size();
  }
  return out;
}

inline json admit(const ThreeGraph& f, const Palette& p, const std::string& method, const AdmissionOptions& options) {
  const auto s = as_star(f);
  std::string used = method;
  if (used == "auto") used = s ? "star" : "general";
  if (used == "star" && !s) throw invalid_input("the star method needs a star graph");
  AdmissionVerdict v;
  if (used == "star") {
    // The digraph route works in star(k)'s own vertex labels; map to f's if the apex differs.
    v = star_admission_any(p, s->first);
    if (v.certificate && s->second != 0) {
      std::vector<Vertex> to_f(f.vertices());
      to_f[0] = s->second;
      for (Vertex i = 1, next = 0; i < f.vertices(); ++i, ++next) {
        if (next == s->second) ++next;
        to_f[i] = next;
      }
      AdmissionCertificate mapped;
      for (Vertex u : v.certificate->order) mapped.order.push_back(to_f[u]);
      for (const auto& [pair, c] : v.certificate->coloring) mapped.coloring[make_pair_key(to_f[pair.first], to_f[pair.second])] = c;
      if (!check_certificate(f, p, mapped)) throw invariant_violation("relabeled star certificate fails verification");
      v.certificate = std::move(mapped);
    }
  } else {
    v = decide_admission(f, p, options);
  }
  json out = io::to_json(v);
  out["method"] = used;
  return out;
}

inline json digraph(const Palette& p, std::optional<std::size_t> cutoff, std::string* dot) {
  return with_digraph_width(2 * p.colors(), [&]<std::size_t W>() -> json {
    const auto built = build_digraph<W>(p);
    if (const auto* loop = std::get_if<LoopAdmission>(&built)) {
      if (dot) *dot = "";
      return json{{"loop", {{"triple", detail::triple_json(loop->triple)}, {"side", loop->side}, {"color", loop->color}}},
                  {"admitsEveryStar", true}};
    }
    const auto& d = std::get<BasicColorDigraph<W>>(built);
    if (dot) *dot = to_dot(d);
    const TTResult tt = max_transitive_tournament(d.graph, cutoff.value_or(kNoCutoff));
    return json{{"digraph", io::to_json(d)},
                {"maxTransitiveTournament", tt.size},
                {"cutoffReached", cutoff && tt.size >= *cutoff},
                {"witness", tt.witness.vertices}};
  });
}

inline json suite_result(std::size_t checked, std::size_t failures, std::optional<json> first_failure,
                         std::optional<std::size_t> skipped = std::nullopt) {
  json out{{"checked", checked}, {"failures", failures}};
  if (skipped) out["skipped"] = *skipped;
  if (first_failure) out["firstFailure"] = std::move(*first_failure);
  return out;
}

inline json verify_lemma3(std::size_t count, std::size_t max_colors, std::uint64_t seed, unsigned threads) {
  SplitMix64 rng(seed);
  std::vector<Palette> ps;
  for (std::size_t i = 0; i < count; ++i) ps.push_back(random_palette(rng, max_colors));
  std::vector<char> ok(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const auto r = palette_turan::verify_lemma3(ps[i]);
    ok[i] = r.passed && r.inclusion_exclusion_passed && r.degree_formulas_agree;
  });
  std::size_t failures = 0;
  std::optional<json> first;
  for (std::size_t i = 0; i < count; ++i) {
    if (ok[i]) continue;
    if (failures++ == 0) first = json{{"index", i}, {"palette", io::to_json(ps[i])}};
  }
  return suite_result(count, failures, first);
}

inline json verify_claim1(std::size_t count, std::size_t max_colors, std::uint64_t seed, unsigned threads) {
  SplitMix64 rng(seed);
  std::vector<Palette> ps;
  for (std::size_t i = 0; i < count; ++i) ps.push_back(minimality_reduce(random_palette(rng, max_colors)).palette);
  std::vector<char> state(count);  // 0 fail, 1 pass, 2 degenerate
  parallel_for(count, threads, [&](std::size_t i) {
    if (ps[i].colors() == 0) {
      state[i] = 2;
      return;
    }
    state[i] = palette_turan::verify_claim1(ps[i]).passed ? 1 : 0;
  });
  std::size_t failures = 0, skipped = 0;
  std::optional<json> first;
  for (std::size_t i = 0; i < count; ++i) {
    if (state[i] == 2) ++skipped;
    if (state[i] != 0) continue;
    if (failures++ == 0) first = json{{"index", i}, {"palette", io::to_json(ps[i])}};
  }
  return suite_result(count - skipped, failures, first, skipped);
}

inline json verify_lemma4(std::size_t count, std::size_t max_vertices, std::uint64_t seed, unsigned threads) {
  if (max_vertices == 0 || max_vertices > 128) throw invalid_input("--vertices must be in 1..128");
  SplitMix64 rng(seed);
  std::vector<Digraph> ds;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 1 + rng.below(max_vertices);
    ds.push_back(random_digraph(rng, n, rng.uniform()));
  }
  std::vector<char> ok(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const std::size_t k = max_transitive_tournament(ds[i]).size + 1;
    const auto r = palette_turan::verify_lemma4(ds[i], k);
    ok[i] = r.applicable && r.passed;
  });
  std::size_t failures = 0;
  std::optional<json> first;
  for (std::size_t i = 0; i < count; ++i) {
    if (ok[i]) continue;
    if (failures++ == 0) first = json{{"index", i}, {"digraph", io::to_json(ds[i])}};
  }
  return suite_result(count, failures, first);
}

inline json verify_claims34(std::size_t count, const std::vector<long long>& ks, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::size_t checked = 0, failures = 0;
  std::optional<json> first;
  for (long long k : ks) {
    if (k < 4) throw invalid_input("tangent bounds need k >= 4");
    for (std::size_t i = 0; i < count; ++i) {
      const auto span = static_cast<std::uint64_t>(4 * k);
      const Rational x3 = random_rational_at_least(rng, chain_functions::claim3_range_start(k), span);
      const Rational x4 = random_rational_at_least(rng, chain_functions::claim4_range_start(k), span);
      const bool ok3 = verify_claim3(k, x3).holds();
      const bool ok4 = verify_claim4(k, x4).holds();
      checked += 2;
      if (!ok3 && failures++ == 0) first = json{{"claim", "f1"}, {"k", k}, {"x", io::to_json(x3)}};
      if (!ok4 && failures++ == 0) first = json{{"claim", "g1"}, {"k", k}, {"x", io::to_json(x4)}};
    }
  }
  return suite_result(checked, failures, first);
}

// Digraph route against the general order-class search on stars.
inline json verify_oracles(std::size_t count, std::size_t max_colors, std::size_t max_k, std::uint64_t seed,
                           unsigned threads) {
  if (max_k < 2 || max_k > 7) throw invalid_input("--max-k must be in 2..7");
  SplitMix64 rng(seed);
  std::vector<std::pair<Palette, std::size_t>> cases;
  for (std::size_t i = 0; i < count; ++i) {
    Palette p = random_palette(rng, max_colors);
    cases.emplace_back(std::move(p), 2 + rng.below(max_k - 1));
  }
  std::vector<char> agree(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const auto& [p, k] = cases[i];
    agree[i] = star_admission_any(p, k).admits() == decide_admission(star(k), p).admits();
  });
  std::size_t failures = 0;
  std::optional<json> first;
  for (std::size_t i = 0; i < count; ++i) {
    if (agree[i]) continue;
    if (failures++ == 0) first = json{{"index", i}, {"k", cases[i].second}, {"palette", io::to_json(cases[i].first)}};
  }
  return suite_result(count, failures, first);
}

inline json claim1_single(const Palette& p) {
  const auto r = palette_turan::verify_claim1(p);
  json out{{"passed", r.passed}, {"density", io::to_json(r.density)}, {"bound", io::to_json(r.bound)}};
  if (r.violation) {
    out["violation"] = {{"color", r.violation->color}, {"i", r.violation->i}, {"j", r.violation->j},
                        {"ratio", io::to_json(r.violation->ratio)}};
  }
  return out;
}

inline json lemma3_single(const Palette& p) {
  const auto r = palette_turan::verify_lemma3(p);
  auto big = [](const Integer& v) { return io::integer_json(v); };
  return json{{"density", io::to_json(r.density)},
              {"rhs", io::to_json(r.rhs)},
              {"passed", r.passed},
              {"x1", big(r.x1)}, {"x2", big(r.x2)}, {"x3", big(r.x3)},
              {"x12", big(r.x12)}, {"x13", big(r.x13)}, {"x23", big(r.x23)},
              {"inclusionExclusionBound", big(r.inclusion_exclusion_bound)},
              {"inclusionExclusionPassed", r.inclusion_exclusion_passed},
              {"degreeFormulasAgree", r.degree_formulas_agree}};
}

inline json lemma4_single(const Digraph& d, std::size_t k) {
  const auto r = palette_turan::verify_lemma4(d, k);
  json out{{"applicable", r.applicable}, {"maxTransitiveTournament", r.max_tt}, {"bound", io::to_json(r.bound)}};
  if (r.applicable) {
    out["sum"] = io::to_json(r.sum);
    out["passed"] = r.passed;
  } else {
    out["witness"] = r.witness.vertices;
  }
  return out;
}

inline json exhaustive(const ThreeGraph& f, std::size_t n, const AdmissionOptions& options) {
  const auto r = exhaustive_best(f, n, options);
  json out{{"method", "exhaustive"}, {"colors", n}, {"palettesChecked", r.palettes_checked},
           {"nonAdmitting", r.non_admitting}};
  out["bestDensity"] = r.best_density ? io::to_json(*r.best_density) : json("none");
  out["witness"] = r.witness ? io::to_json(*r.witness) : json(nullptr);
  return out;
}

inline json local(const ThreeGraph& f, std::size_t n, std::size_t iters, std::uint64_t seed,
                  const LocalSearchOptions& options, bool with_trace) {
  const auto r = local_search(f, n, iters, seed, options);
  json out{{"method", "local"},
           {"heuristic", true},
           {"colors", n},
           {"iterations", iters},
           {"restarts", options.restarts},
           {"seed", seed},
           {"bestDensity", io::to_json(r.best_density)},
           {"witness", io::to_json(r.witness)},
           {"admissionChecks", r.admission_checks}};
  if (with_trace) {
    json trace = json::array();
    for (const auto& e : r.trace)
      trace.push_back({{"restart", e.restart}, {"iteration", e.iteration}, {"triples", e.triples}, {"event", e.event}});
    out["trace"] = std::move(trace);
  }
  return out;
}

inline json construct(const Palette& p, std::size_t n, std::uint64_t seed, const std::optional<ThreeGraph>& check,
                      std::size_t samples, RodlConstruction* keep) {
  auto r = rodl_construct(p, n, seed);
  json out{{"vertices", n}, {"seed", seed}, {"edges", r.graph.edge_count()}, {"paletteDensity", io::to_json(density(p))}};
  if (n >= 3) {
    const Integer triples = Integer(n) * (n - 1) * (n - 2) / 6;
    out["edgeDensity"] = io::to_json(Rational(Integer(r.graph.edge_count()), triples));
  }
  if (check) {
    const auto copy = contains_copy(r.graph, *check);
    out["copy"] = copy ? json(*copy) : json(nullptr);
  }
  if (samples > 0 && n >= 3) {
    json prof = json::array();
    for (const auto& s : subset_density_profile(r.graph, samples, seed))
      prof.push_back({{"size", s.subset_size}, {"samples", s.samples}, {"min", io::to_json(s.min_density)},
                      {"mean", io::to_json(s.mean_density)}});
    out["subsetDensity"] = std::move(prof);
  }
  if (keep) *keep = std::move(r);
  return out;
}

}  // namespace commands

inline json version_json() {
  return json{{"version", kToolVersion},
              {"formats",
               {{"palette", io::kFormatVersion},
                {"graph", io::kFormatVersion},
                {"digraph", io::kFormatVersion},
                {"certificate", io::kFormatVersion},
                {"report", io::kFormatVersion}}}};
}

/// Parses and runs one command line (args excludes the program name).
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tools for palettes, star admission and density bounds", "palette-turan"};
  app.fallthrough();
  Context ctx;
  ctx.threads = default_threads();
  bool show_version = false;
  app.add_flag("--json", ctx.json_mode, "Emit a single JSON document");
  app.add_option("--threads", ctx.threads, "Worker threads (default from PALETTE_TURAN_THREADS)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--version", show_version, "Print tool and file format versions");

  std::string palette_path, graph_path, host_path, pattern_path, output_path, dot_path, digraph_path, check_path;
  std::string method = "auto";
  long long k = 0, k_from = 31, k_to = 48;
  std::vector<long long> ks{31, 48, 100};
  std::size_t color = 0, count = 0, max_colors = 6, max_vertices = 14, max_k = 4, n = 0, iters = 0, restarts = 4,
              samples = 0, max_graph_vertices = 8;
  std::optional<std::size_t> cutoff;
  std::uint64_t seed = 0;
  bool exhaustive_flag = false, trace = false, no_quotient = false, reduce_first = false;
  std::function<json()> run;

  auto palette_opt = [&](CLI::App* c, bool required = true) {
    auto* o = c->add_option("--palette", palette_path, "Palette file (JSON or text)");
    if (required) o->required();
  };
  auto output_opt = [&](CLI::App* c, const char* what) { c->add_option("-o,--output", output_path, what); };

  // palette
  auto* pal = app.add_subcommand("palette", "Inspect and reduce palettes")->require_subcommand(1);
  auto* pal_info = pal->add_subcommand("info", "Density, good-pair degrees and minimality");
  palette_opt(pal_info);
  pal_info->callback([&] { run = [&] { return commands::palette_info(io::read_palette(palette_path)); }; });
  auto* pal_reduce = pal->add_subcommand("reduce", "Remove colors until every removal lowers the density");
  palette_opt(pal_reduce);
  output_opt(pal_reduce, "Write the reduced palette");
  pal_reduce->callback([&] {
    run = [&] {
      const Palette p = io::read_palette(palette_path);
      json j = commands::reduce(p);
      if (!output_path.empty()) detail::save_palette(output_path, minimality_reduce(p).palette);
      return j;
    };
  });
  auto* pal_remove = pal->add_subcommand("remove", "Remove one color");
  palette_opt(pal_remove);
  pal_remove->add_option("--color", color, "Color to remove")->required();
  output_opt(pal_remove, "Write the resulting palette");
  pal_remove->callback([&] {
    run = [&] {
      const Palette p = io::read_palette(palette_path);
      if (color >= p.colors()) throw invalid_input("color " + std::to_string(color) + " is not in the palette");
      json j = commands::remove(p, static_cast<Color>(color));
      if (!output_path.empty()) detail::save_palette(output_path, remove_color(p, static_cast<Color>(color)).palette);
      return j;
    };
  });

  // graph
  auto* gr = app.add_subcommand("graph", "3-graph generators and copy search")->require_subcommand(1);
  auto* gr_info = gr->add_subcommand("info", "Size, star shape and symmetry");
  gr_info->add_option("--graph", graph_path, "Graph file")->required();
  gr_info->callback([&] { run = [&] { return commands::graph_info(io::read_graph(graph_path)); }; });
  auto* gr_star = gr->add_subcommand("star", "The k-star: apex 0 and leaves 1..k");
  gr_star->add_option("--k", k, "Number of leaves")->required();
  output_opt(gr_star, "Write the graph");
  gr_star->callback([&] {
    run = [&] {
      if (k < 2) throw invalid_input("star needs k >= 2");
      const ThreeGraph g = star(static_cast<std::size_t>(k));
      if (!output_path.empty()) detail::save_graph(output_path, g);
      return io::to_json(g);
    };
  });
  auto* gr_complete = gr->add_subcommand("complete", "Complete 3-graph");
  gr_complete->add_option("--n", n, "Vertices")->required();
  output_opt(gr_complete, "Write the graph");
  gr_complete->callback([&] {
    run = [&] {
      const ThreeGraph g = complete_three_graph(n);
      if (!output_path.empty()) detail::save_graph(output_path, g);
      return io::to_json(g);
    };
  });
  auto* gr_contains = gr->add_subcommand("contains", "Search for a copy of a pattern in a host");
  gr_contains->add_option("--host", host_path, "Host graph file")->required();
  gr_contains->add_option("--pattern", pattern_path, "Pattern graph file (at most 10 vertices)")->required();
  gr_contains->callback([&] {
    run = [&] {
      const auto copy = contains_copy(io::read_graph(host_path), io::read_graph(pattern_path));
      return json{{"contains", copy.has_value()}, {"injection", copy ? json(*copy) : json(nullptr)}};
    };
  });

  // admit
  auto* adm = app.add_subcommand("admit", "Decide whether a graph admits a palette");
  palette_opt(adm);
  adm->add_option("--graph", graph_path, "Graph file")->required();
  adm->add_option("--method", method, "auto, star or general")->check(CLI::IsMember({"auto", "star", "general"}));
  adm->add_option("--max-vertices", max_graph_vertices, "Vertex budget of the general search");
  adm->add_flag("--no-quotient", no_quotient, "Search every vertex order, not one per symmetry class");
  adm->callback([&] {
    run = [&] {
      AdmissionOptions o;
      o.max_vertices = max_graph_vertices;
      o.threads = ctx.threads;
      o.quotient_by_automorphisms = !no_quotient;
      return commands::admit(io::read_graph(graph_path), io::read_palette(palette_path), method, o);
    };
  });

  // digraph
  auto* dig = app.add_subcommand("digraph", "Build the color digraph and its largest transitive tournament");
  palette_opt(dig);
  dig->add_option("--cutoff", cutoff, "Stop once a transitive tournament of this size is found");
  dig->add_option("--dot", dot_path, "Write a DOT rendering");
  dig->callback([&] {
    run = [&] {
      std::string dot;
      json j = commands::digraph(io::read_palette(palette_path), cutoff, dot_path.empty() ? nullptr : &dot);
      if (!dot_path.empty()) io::write_file(dot_path, dot);
      return j;
    };
  });

  // verify
  auto* ver = app.add_subcommand("verify", "Randomized and single-instance checks of the bounds")->require_subcommand(1);
  auto random_opts = [&](CLI::App* c, bool colors) {
    c->add_option("--random", count, "Number of random instances");
    c->add_option("--seed", seed, "Random seed (required with --random)");
    if (colors) c->add_option("--colors", max_colors, "Largest color count");
  };
  auto need_seed = [&](CLI::App* c) {
    if (c->count("--random") && !c->count("--seed")) throw CLI::RequiredError("--seed");
  };
  auto* v3 = ver->add_subcommand("lemma3", "Inclusion-exclusion density bound");
  random_opts(v3, true);
  palette_opt(v3, false);
  v3->callback([&] {
    need_seed(v3);
    run = [&] {
      if (!palette_path.empty()) return commands::lemma3_single(io::read_palette(palette_path));
      if (!v3->count("--random")) throw invalid_input("give --palette or --random");
      return commands::verify_lemma3(count, max_colors, seed, ctx.threads);
    };
  });
  auto* v1 = ver->add_subcommand("claim1", "Good-pair degree bound on minimal palettes");
  random_opts(v1, true);
  palette_opt(v1, false);
  v1->callback([&] {
    need_seed(v1);
    run = [&] {
      if (!palette_path.empty()) return commands::claim1_single(io::read_palette(palette_path));
      if (!v1->count("--random")) throw invalid_input("give --palette or --random");
      return commands::verify_claim1(count, max_colors, seed, ctx.threads);
    };
  });
  auto* v4 = ver->add_subcommand("lemma4", "Degree-sum bound for digraphs without a transitive tournament");
  random_opts(v4, false);
  v4->add_option("--vertices", max_vertices, "Largest vertex count");
  v4->add_option("--digraph", digraph_path, "Digraph file");
  v4->add_option("--k", k, "Forbidden tournament size (default: largest + 1)");
  v4->callback([&] {
    need_seed(v4);
    run = [&] {
      if (!digraph_path.empty()) {
        const Digraph d = io::digraph_from_json(io::parse_json(io::read_file(digraph_path), "digraph"));
        const std::size_t kk = k > 0 ? static_cast<std::size_t>(k) : max_transitive_tournament(d).size + 1;
        return commands::lemma4_single(d, kk);
      }
      if (!v4->count("--random")) throw invalid_input("give --digraph or --random");
      return commands::verify_lemma4(count, max_vertices, seed, ctx.threads);
    };
  });
  auto* v34 = ver->add_subcommand("claims34", "Tangent bounds for f1 and g1 at random points");
  random_opts(v34, false);
  v34->add_option("--k", ks, "Values of k");
  v34->callback([&] {
    if (!v34->count("--random")) throw CLI::RequiredError("--random");
    need_seed(v34);
    run = [&] { return commands::verify_claims34(count, ks, seed); };
  });
  auto* vo = ver->add_subcommand("oracles", "Digraph route against the general search on random palettes");
  random_opts(vo, true);
  vo->add_option("--max-k", max_k, "Largest star size");
  vo->callback([&] {
    if (!vo->count("--random")) throw CLI::RequiredError("--random");
    need_seed(vo);
    run = [&] { return commands::verify_oracles(count, max_colors, max_k, seed, ctx.threads); };
  });

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Lower-bound palettes and the inequality chain")->require_subcommand(1);
  auto* b_chain = bnd->add_subcommand("chain", "Verify every step of the upper-bound chain on a palette");
  palette_opt(b_chain);
  b_chain->add_option("--k", k, "Star size")->required();
  b_chain->add_flag("--reduce", reduce_first, "Reduce the palette to a minimal one first");
  b_chain->callback([&] {
    run = [&] {
      Palette p = io::read_palette(palette_path);
      if (reduce_first) p = minimality_reduce(p).palette;
      return io::to_json(chain_verify(p, k));
    };
  });
  auto* b_star = bnd->add_subcommand("star-palette", "The lower-bound palette on k-1 colors");
  b_star->add_option("--k", k, "Star size")->required();
  output_opt(b_star, "Write the palette");
  b_star->callback([&] {
    run = [&] {
      if (k < 3) throw invalid_input("star palette needs k >= 3");
      const Palette p = star_palette(static_cast<std::size_t>(k));
      if (!output_path.empty()) detail::save_palette(output_path, p);
      return json{{"k", k},
                  {"colors", p.colors()},
                  {"triples", p.size()},
                  {"density", io::to_json(density(p))},
                  {"formula", io::to_json(star_palette_density_formula(k))}};
    };
  });
  auto* b_thr = bnd->add_subcommand("thresholds", "Least k for the two tangent-range conditions");
  b_thr->callback([&] {
    run = [&] {
      const auto t = thresholds();
      return json{{"kStar", t.k_star}, {"kG", t.k_g}};
    };
  });
  auto* b_id = bnd->add_subcommand("identity", "Check 1/4 + 3(k-3)^2/(4(k-1)^2) = (k^2-5k+7)/(k-1)^2");
  b_id->add_option("--from", k_from, "First k")->required();
  b_id->add_option("--to", k_to, "Last k")->required();
  b_id->callback([&] {
    run = [&] {
      if (k_from < 2 || k_to < k_from) throw invalid_input("need 2 <= from <= to");
      std::size_t failures = 0;
      json bad = json::array();
      for (long long kk = k_from; kk <= k_to; ++kk)
        if (!final_identity(kk)) ++failures, bad.push_back(kk);
      return json{{"checked", k_to - k_from + 1}, {"failures", failures}, {"failing", bad}};
    };
  });
  auto* b_ref = bnd->add_subcommand("refined", "Decide the sharpened f1 averaging bound for each k");
  b_ref->add_option("--from", k_from, "First k (at least 31)");
  b_ref->add_option("--to", k_to, "Last k");
  b_ref->callback([&] { run = [&] { return io::to_json(refined_threshold(k_from, k_to, ctx.threads)); }; });

  // search
  auto* sea = app.add_subcommand("search", "Densest palette a graph does not admit");
  sea->add_option("--graph", graph_path, "Graph file")->required();
  sea->add_option("--colors", n, "Number of colors")->required();
  auto* ex_flag = sea->add_flag("--exhaustive", exhaustive_flag, "Enumerate every palette (n^3 <= 12)");
  auto* it_opt = sea->add_option("--iters", iters, "Local search iterations per restart");
  sea->add_option("--seed", seed, "Random seed (required for local search)");
  sea->add_option("--restarts", restarts, "Independent restarts");
  sea->add_flag("--trace", trace, "Include the improvement trace");
  output_opt(sea, "Write the witness palette");
  ex_flag->excludes(it_opt);
  sea->callback([&] {
    if (!exhaustive_flag && !sea->count("--iters")) throw CLI::ValidationError("search", "give --exhaustive or --iters");
    if (!exhaustive_flag && !sea->count("--seed")) throw CLI::RequiredError("--seed");
    run = [&] {
      const ThreeGraph f = io::read_graph(graph_path);
      AdmissionOptions ao;
      ao.threads = ctx.threads;
      json j;
      if (exhaustive_flag) {
        j = commands::exhaustive(f, n, ao);
      } else {
        LocalSearchOptions lo;
        lo.restarts = restarts;
        lo.threads = ctx.threads;
        j = commands::local(f, n, iters, seed, lo, trace);
      }
      if (!output_path.empty() && !j["witness"].is_null())
        detail::save_palette(output_path, io::palette_from_json(j["witness"]));
      return j;
    };
  });

  // construct
  auto* con = app.add_subcommand("construct", "Random pair-coloring construction from a palette");
  palette_opt(con);
  con->add_option("--n", n, "Vertices")->required();
  con->add_option("--seed", seed, "Random seed")->required();
  con->add_option("--check", check_path, "Pattern graph to search for in the result");
  con->add_option("--samples", samples, "Random subsets per size for the density profile");
  output_opt(con, "Write the graph");
  con->callback([&] {
    run = [&] {
      std::optional<ThreeGraph> pattern;
      if (!check_path.empty()) pattern = io::read_graph(check_path);
      RodlConstruction built;
      json j = commands::construct(io::read_palette(palette_path), n, seed, pattern, samples, &built);
      if (!output_path.empty()) detail::save_graph(output_path, built.graph);
      return j;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
    if (show_version) {
      if (ctx.json_mode) out << version_json().dump() << "\n";
      else detail::render(version_json(), out, 0);
      return kOk;
    }
    if (!run) {
      err << app.help();
      return kUsage;
    }
    const json result = run();
    if (ctx.json_mode) out << result.dump() << "\n";
    else detail::render(result, out, 0);
    return kOk;
  } catch (const CLI::CallForHelp&) {
    const CLI::App* cur = &app;
    while (!cur->get_subcommands().empty()) cur = cur->get_subcommands().front();
    out << cur->help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    for (const auto& token : detail::unexpected_tokens(e.what()))
      if (auto s = detail::suggest(app, token)) err << "  did you mean " << *s << " instead of " << token << "?\n";
    for (const auto& [token, name] : detail::misspelled_subcommands(app, args))
      err << "  did you mean " << name << " instead of " << token << "?\n";
    err << "run with --help for usage\n";
    return kUsage;
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const budget_exceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const invariant_violation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
}

}  // namespace palette_turan::cli
