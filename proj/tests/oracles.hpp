#pragma once

// Slow, independent reference implementations used to check the library.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "ddx2/algebra.hpp"

namespace oracle {

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Products of at most two elements, computed on coordinate tuples with
// std::set and the spec's compose only.
inline std::set<ddx2::GroupElement> two_ball(const ddx2::GroupSpec& spec, const std::vector<ddx2::GroupElement>& x) {
  std::set<ddx2::GroupElement> out;
  out.insert(spec.identity());
  for (const auto& a : x) {
    out.insert(a);
    for (const auto& b : x) out.insert(spec.compose(a, b));
  }
  return out;
}

// Diameter-2 test for a circulant given as a set of residues.
inline bool circulant_diameter_2(std::uint64_t n, const std::set<std::uint64_t>& x) {
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (auto a : x) {
    seen[a % n] = 1;
    for (auto b : x) seen[(a + b) % n] = 1;
  }
  for (auto c : seen)
    if (!c) return false;
  return true;
}

inline std::set<std::uint64_t> circulant_x(std::uint64_t n, const std::vector<std::uint64_t>& gens, bool half) {
  std::set<std::uint64_t> x;
  for (auto g : gens) {
    x.insert(g % n);
    x.insert((n - g % n) % n);
  }
  if (half) x.insert(n / 2);
  return x;
}

// Number of integer points x in Z^f with sum |x_i| <= k.
inline std::uint64_t l1_ball(unsigned f, int k) {
  if (k < 0) return 0;
  if (f == 0) return 1;
  std::uint64_t total = 0;
  for (int xi = -k; xi <= k; ++xi) total += l1_ball(f - 1, k - (xi < 0 ? -xi : xi));
  return total;
}

// Largest n <= n_max such that some g-subset of [1, (n-1)/2] (plus n/2 when
// odd) gives a diameter-2 circulant. No symmetry reduction.
inline std::uint64_t brute_extremal(std::uint64_t d, std::uint64_t n_max) {
  const bool odd = d % 2 == 1;
  const unsigned g = static_cast<unsigned>(d / 2);
  for (std::uint64_t n = n_max; n >= 3; --n) {
    if (odd && n % 2) continue;
    std::uint64_t limit = (n - 1) / 2;
    if (limit < g) continue;
    std::vector<std::uint64_t> pick(g);
    for (unsigned i = 0; i < g; ++i) pick[i] = i + 1;
    while (true) {
      if (circulant_diameter_2(n, circulant_x(n, pick, odd))) return n;
      int i = static_cast<int>(g) - 1;
      while (i >= 0 && pick[i] == limit - (g - 1 - i)) --i;
      if (i < 0) break;
      ++pick[i];
      for (unsigned j = i + 1; j < g; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return 0;
}

} // namespace oracle
