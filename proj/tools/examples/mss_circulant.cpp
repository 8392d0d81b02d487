// Builds the l=5 circulant family on F* x F+ x Z_9 for a few primes, checks
// diameter 2 and prints the order against the closed form.

#include <iostream>

#include "ddx2/ddx2.hpp"

int main() {
  using namespace ddx2;
  auto family = family_from_table(VariantKind::CyclicGalois, 9, {1}, {3}, {0});
  std::cout << "residues covered exactly once: " << (residue_coverage(family).perfect() ? "yes" : "no") << '\n';
  for (auto p : admissible_primes(family, 4)) {
    auto r = verify_family_instance(family, GaloisParams{p});
    auto expect = construction_order(Construction::MssCirculant, p);
    std::cout << "p=" << p << " order " << r.order << " degree " << r.degree << " diameter 2 "
              << (r.is_diameter_2 ? "yes" : "no") << " (closed form " << expect.order << ", degree "
              << expect.degree << ")\n";
  }
}
