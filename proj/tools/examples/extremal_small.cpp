// Searches the largest diameter-2 circulant for each small degree and
// compares with the bundled catalog.

#include <iostream>

#include "ddx2/ddx2.hpp"

int main(int argc, char** argv) {
  using namespace ddx2;
  const std::uint64_t max_d = argc > 1 ? std::stoull(argv[1]) : 9;
  std::vector<ExtremalRecord> known;
  if (argc > 2) known = read_catalog(argv[2]);
  for (std::uint64_t d = 2; d <= max_d; ++d) {
    ExtremalSearchOptions opts;
    opts.jobs = default_jobs();
    auto rec = search_extremal(d, opts);
    std::cout << to_line(rec);
    for (const auto& k : known)
      if (k.d == d) std::cout << (k.n == rec.n ? "  matches catalog" : "  differs from catalog n=" + std::to_string(k.n));
    std::cout << '\n';
  }
}
