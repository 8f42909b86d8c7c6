#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace palette_turan {

using Color = std::uint16_t;
using Triple = std::array<Color, 3>;

/// A finite color set {0, ..., n-1} together with a set of admissible ordered
/// color triples. Immutable once built; triples are kept sorted.
class Palette {
 public:
  Palette() = default;

  static constexpr std::size_t kMaxColors = std::numeric_limits<Color>::max();

  Palette(std::size_t colors, std::vector<Triple> triples) : colors_(colors), triples_(std::move(triples)) {
    if (colors_ > kMaxColors) throw invalid_input("palettes are limited to " + std::to_string(kMaxColors) + " colors");
    // One pass over integer keys: strictly increasing keys mean sorted and
    // duplicate-free, so the common already-sorted input is never re-sorted.
    if (!index_sorted()) {
      std::sort(triples_.begin(), triples_.end());
      if (!index_sorted()) {
        const auto dup = std::adjacent_find(triples_.begin(), triples_.end());
        const Triple& tr = *dup;
        throw invalid_input("duplicate palette triple (" + std::to_string(tr[0]) + "," + std::to_string(tr[1]) + "," +
                            std::to_string(tr[2]) + ")");
      }
    }
  }

  static Palette complete(std::size_t n) {
    std::vector<Triple> all;
    all.reserve(n * n * n);
    for (Color a = 0; a < n; ++a)
      for (Color b = 0; b < n; ++b)
        for (Color c = 0; c < n; ++c) all.push_back({a, b, c});
    return Palette(n, std::move(all));
  }

  static Palette empty(std::size_t n) { return Palette(n, {}); }

  std::size_t colors() const { return colors_; }
  std::size_t size() const { return triples_.size(); }
  bool degenerate() const { return colors_ == 0; }
  const std::vector<Triple>& triples() const { return triples_; }

  bool contains(const Triple& t) const {
    if (t[0] >= colors_ || t[1] >= colors_ || t[2] >= colors_) return false;
    const std::uint64_t k = key(t);
    if (colors_ <= kDenseColorLimit) return (dense_[k / 64] >> (k % 64)) & 1;
    return sparse_.count(k) != 0;
  }

  // Indices into triples() of the triples carrying `a` at `position` (1, 2 or 3).
  const std::vector<std::size_t>& with_color_at(int position, Color a) const {
    std::call_once(positions_->once, [&] {
      for (auto& v : positions_->lists) v.assign(colors_, {});
      for (std::size_t t = 0; t < triples_.size(); ++t)
        for (int pos = 0; pos < 3; ++pos) positions_->lists[pos][triples_[t][pos]].push_back(t);
    });
    return positions_->lists.at(static_cast<std::size_t>(position - 1)).at(a);
  }

  // Number of triples in which `a` occurs at least once.
  std::size_t triples_touching(Color a) const {
    std::size_t count = with_color_at(1, a).size();
    for (std::size_t t : with_color_at(2, a))
      if (triples_[t][0] != a) ++count;
    for (std::size_t t : with_color_at(3, a))
      if (triples_[t][0] != a && triples_[t][1] != a) ++count;
    return count;
  }

  friend bool operator==(const Palette& x, const Palette& y) {
    return x.colors_ == y.colors_ && x.triples_ == y.triples_;
  }
  friend std::strong_ordering operator<=>(const Palette& x, const Palette& y) {
    if (auto c = x.colors_ <=> y.colors_; c != 0) return c;
    return x.triples_ <=> y.triples_;
  }

 private:
  // Validates colors and fills the membership index; false if keys are not
  // strictly increasing.
  bool index_sorted() {
    const bool dense = colors_ <= kDenseColorLimit;
    if (dense) dense_.assign((static_cast<std::uint64_t>(colors_) * colors_ * colors_ + 63) / 64, 0);
    else sparse_.clear(), sparse_.reserve(triples_.size() * 2);
    std::uint64_t prev = 0;
    for (std::size_t t = 0; t < triples_.size(); ++t) {
      const Triple& tr = triples_[t];
      if (tr[0] >= colors_ || tr[1] >= colors_ || tr[2] >= colors_) {
        throw invalid_input("palette triple (" + std::to_string(tr[0]) + "," + std::to_string(tr[1]) + "," +
                            std::to_string(tr[2]) + ") uses a color >= " + std::to_string(colors_));
      }
      const std::uint64_t k = key(tr);
      if (t > 0 && k <= prev) return false;
      prev = k;
      if (dense) dense_[k / 64] |= std::uint64_t{1} << (k % 64);
      else sparse_.insert(k);
    }
    return true;
  }

  std::uint64_t key(const Triple& t) const {
    return (static_cast<std::uint64_t>(t[0]) * colors_ + t[1]) * colors_ + t[2];
  }

  std::size_t colors_ = 0;
  std::vector<Triple> triples_;
  // Membership: a bitmap over all n^3 cells for small n, a hash set beyond.
  static constexpr std::size_t kDenseColorLimit = 256;
  std::vector<std::uint64_t> dense_;
  std::unordered_set<std::uint64_t> sparse_;
  // Built on first use and shared by copies.
  struct PositionLists {
    std::once_flag once;
    std::array<std::vector<std::vector<std::size_t>>, 3> lists;
  };
  std::shared_ptr<PositionLists> positions_ = std::make_shared<PositionLists>();
};

inline Rational density(const Palette& p) {
  if (p.colors() == 0) throw invalid_input("density of a palette with zero colors is undefined");
  const Integer n(p.colors());
  return Rational(Integer(p.size()), n * n * n);
}

/// The six ordered position pairs (i, j), i != j, in the fixed order used for indexing.
inline constexpr std::array<std::pair<int, int>, 6> kPositionPairs = {
    {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}}};

/// For every ordered position pair (i, j): which color pairs (a, b) occur as
/// (c_i, c_j) of some admissible triple, and the per-color counts.
class GoodPairTable {
 public:
  explicit GoodPairTable(const Palette& p) : n_(p.colors()) {
    for (auto& g : good_) g.assign(n_ * n_, false);
    for (auto& d : degree_) d.assign(n_, 0);
    for (const Triple& t : p.triples()) {
      for (std::size_t r = 0; r < kPositionPairs.size(); ++r) {
        const auto [i, j] = kPositionPairs[r];
        const Color a = t[i - 1];
        const Color b = t[j - 1];
        auto ref = good_[r][a * n_ + b];
        if (!ref) {
          ref = true;
          ++degree_[r][a];
        }
      }
    }
  }

  std::size_t colors() const { return n_; }

  bool good(int i, int j, Color a, Color b) const { return good_[role(i, j)][a * n_ + b]; }
  std::size_t degree(int i, int j, Color a) const { return degree_[role(i, j)][a]; }
  std::size_t bad_degree(int i, int j, Color a) const { return n_ - degree(i, j, a); }
  Rational ratio(int i, int j, Color a) const {
    return Rational(Integer(degree(i, j, a)), Integer(n_));
  }
  Rational bad_ratio(int i, int j, Color a) const {
    return Rational(Integer(bad_degree(i, j, a)), Integer(n_));
  }

  static std::size_t role(int i, int j) {
    for (std::size_t r = 0; r < kPositionPairs.size(); ++r)
      if (kPositionPairs[r].first == i && kPositionPairs[r].second == j) return r;
    throw invalid_input("position pair (" + std::to_string(i) + "," + std::to_string(j) + ") is not i != j in 1..3");
  }

 private:
  std::size_t n_;
  std::array<std::vector<bool>, 6> good_;
  std::array<std::vector<std::size_t>, 6> degree_;
};

inline GoodPairTable good_pairs(const Palette& p) { return GoodPairTable(p); }

struct ColorRemoval {
  Palette palette;
  std::vector<Color> original_color;  // new color -> color in the input palette
  bool degenerate = false;            // no colors left
};

/// Drops color `a` and every triple using it; survivors are relabeled to 0..n-2 in order.
inline ColorRemoval remove_color(const Palette& p, Color a) {
  if (a >= p.colors()) {
    throw invalid_input("cannot remove color " + std::to_string(a) + " from a palette with " +
                        std::to_string(p.colors()) + " colors");
  }
  auto relabel = [a](Color c) { return static_cast<Color>(c > a ? c - 1 : c); };
  std::vector<Triple> kept;
  kept.reserve(p.size());
  for (const Triple& t : p.triples()) {
    if (t[0] == a || t[1] == a || t[2] == a) continue;
    kept.push_back({relabel(t[0]), relabel(t[1]), relabel(t[2])});
  }
  ColorRemoval out;
  out.palette = Palette(p.colors() - 1, std::move(kept));
  for (Color c = 0; c < p.colors(); ++c)
    if (c != a) out.original_color.push_back(c);
  out.degenerate = out.palette.colors() == 0;
  return out;
}

namespace detail {

// Does removing `a` leave the density at least as large? A zero-color result counts as density 0.
inline bool removal_keeps_density(const Palette& p, Color a) {
  const Integer n(p.colors());
  const Integer total(p.size());
  const Integer remaining = total - Integer(p.triples_touching(a));
  if (p.colors() == 1) return total == 0;
  const Integer m = n - 1;
  return remaining * n * n * n >= total * m * m * m;
}

}  // namespace detail

/// Lowest color whose removal does not strictly decrease the density, if any.
inline std::optional<Color> removable_color(const Palette& p) {
  for (Color a = 0; a < p.colors(); ++a)
    if (detail::removal_keeps_density(p, a)) return a;
  return std::nullopt;
}

inline bool is_minimal(const Palette& p) { return !removable_color(p).has_value(); }

struct MinimalityReduction {
  Palette palette;
  std::vector<Color> original_color;  // color of the result -> color of the input
  std::vector<Color> removed;         // input colors, in removal order
  bool degenerate = false;
};

/// Removes the lowest-index color whose removal does not lower the density,
/// until every removal strictly lowers it.
inline MinimalityReduction minimality_reduce(const Palette& p) {
  MinimalityReduction out;
  out.palette = p;
  out.original_color.resize(p.colors());
  for (Color c = 0; c < p.colors(); ++c) out.original_color[c] = c;
  while (auto a = removable_color(out.palette)) {
    out.removed.push_back(out.original_color[*a]);
    out.original_color.erase(out.original_color.begin() + *a);
    out.palette = remove_color(out.palette, *a).palette;
  }
  out.degenerate = out.palette.colors() == 0;
  return out;
}

struct Claim1Violation {
  Color color;
  int i;
  int j;
  Rational ratio;
};

struct Claim1Report {
  bool passed = true;
  Rational density;
  Rational bound;  // 3 d(P) - 2
  std::optional<Claim1Violation> violation;
};

/// Checks e_{i,j}(a) >= 3 d(P) - 2 for every color and ordered position pair.
/// Only meaningful for minimal palettes; other input is rejected.
inline Claim1Report verify_claim1(const Palette& p) {
  if (p.colors() == 0) throw invalid_input("degree bound needs at least one color");
  if (auto a = removable_color(p)) {
    throw invalid_input("palette is not minimal: removing color " + std::to_string(*a) +
                        " does not decrease the density");
  }
  const GoodPairTable table(p);
  Claim1Report report;
  report.density = density(p);
  report.bound = 3 * report.density - 2;
  for (Color a = 0; a < p.colors() && report.passed; ++a) {
    for (const auto& [i, j] : kPositionPairs) {
      Rational e = table.ratio(i, j, a);
      if (e < report.bound) {
        report.passed = false;
        report.violation = Claim1Violation{a, i, j, std::move(e)};
        break;
      }
    }
  }
  return report;
}

}  // namespace palette_turan
