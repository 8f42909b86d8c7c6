// Walks the lower-bound palette for a few star sizes: density against the
// closed form, the largest transitive tournament of its color digraph, and a
// tight certificate one size down.
#include <iostream>

#include <palette_turan/palette_turan.hpp>

using namespace palette_turan;

int main() {
  for (std::size_t k : {3, 4, 5, 6, 8, 12}) {
    const Palette p = star_palette(k);
    const auto blocked = star_admission_any(p, k);
    const auto tight = star_admission_any(p, k - 1);
    std::cout << "k=" << k << "  colors=" << p.colors() << "  density=" << to_string(density(p))
              << "  formula=" << to_string(star_palette_density_formula(static_cast<long long>(k)))
              << "  maxTT=" << *blocked.max_transitive_tournament << "  admits S_k: " << blocked.admits()
              << "  admits S_(k-1): " << tight.admits() << "\n";
  }
  const auto red = minimality_reduce(star_palette(48));
  const auto report = chain_verify(red.palette, 48);
  std::cout << "chain at k=48: " << to_string(report.verdict) << ", density equals target: "
            << (report.density_equals_target ? "yes" : "no") << "\n";
}
