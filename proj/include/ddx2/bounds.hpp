#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ddx2/algebra.hpp"
#include "ddx2/error.hpp"
#include "ddx2/rational.hpp"

namespace ddx2 {

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

/// Upper bound on the order of an Abelian Cayley graph of degree d and
/// diameter k:
///   even d, f = d/2:      sum_i 2^i C(f,i) C(k,i)
///   odd d,  f = (d-1)/2:  sum_i 2^i C(f,i) (C(k,i) + C(k-1,i))
inline BigInt mac_upper(std::uint64_t d, std::uint64_t k) {
  if (d < 2) throw Error("degree must be >= 2");
  if (k < 1) throw Error("diameter must be >= 1");
  const bool odd = d % 2 == 1;
  const std::uint64_t f = odd ? (d - 1) / 2 : d / 2;
  BigInt sum = 0;
  BigInt power = 1;
  for (std::uint64_t i = 0; i <= f && i <= k; ++i) {
    BigInt term = binomial(k, i);
    if (odd) term += binomial(k - 1, i);
    sum += power * binomial(f, i) * term;
    power *= 2;
  }
  return sum;
}

/// delta by d mod 4; entries left empty are unknown.
using DeltaTable = std::array<std::optional<std::int64_t>, 4>;

/// Circulant lower bound floor(d^2/4) + 2d + delta(d mod 4). The delta
/// constants must be supplied by the caller.
inline std::int64_t lac_lower(std::uint64_t d, const DeltaTable& delta) {
  const int residue = static_cast<int>(d % 4);
  if (!delta[residue]) throw MissingDelta(residue);
  const auto dd = static_cast<std::int64_t>(d);
  return dd * dd / 4 + 2 * dd + *delta[residue];
}

enum class Construction { MssCirculant, Vetrik, MssAbelian };

inline const char* to_string(Construction c) {
  switch (c) {
    case Construction::MssCirculant: return "MSS-circulant";
    case Construction::Vetrik: return "Vetrik";
    case Construction::MssAbelian: return "MSS-abelian";
  }
  return "?";
}

struct ConstructionShape {
  std::uint64_t n;      // Z_n factor
  std::uint64_t l;      // degree = l p - offset
  std::uint64_t offset;
};

inline ConstructionShape construction_shape(Construction c) {
  switch (c) {
    case Construction::MssCirculant: return {9, 5, 3};
    case Construction::Vetrik: return {13, 6, 2};
    case Construction::MssAbelian: return {6, 4, 2};
  }
  throw Error("unknown construction");
}

/// Leading coefficient n / l^2 of the construction's order in d.
inline Rational construction_coefficient(Construction c) {
  auto s = construction_shape(c);
  return Rational(BigInt(s.n), BigInt(s.l * s.l));
}

struct ConstructionOrder {
  std::uint64_t p = 0;
  std::uint64_t degree = 0;
  std::uint64_t order = 0;
};

/// Checks the congruence conditions on p; throws InadmissiblePrime naming
/// the violated one.
inline void require_admissible(Construction c, std::uint64_t p) {
  if (!is_prime(p)) throw NotPrime(p);
  switch (c) {
    case Construction::MssCirculant:
      if (p % 3 != 2) throw InadmissiblePrime("MSS-circulant needs p = 2 (mod 3); got p = " + std::to_string(p));
      break;
    case Construction::Vetrik:
      if (p == 13) throw InadmissiblePrime("Vetrik needs p != 13");
      if (p % 13 == 1) throw InadmissiblePrime("Vetrik needs p != 1 (mod 13); got p = " + std::to_string(p));
      break;
    case Construction::MssAbelian:
      break;
  }
}

/// Degree l p - offset and order n p (p - 1).
inline ConstructionOrder construction_order(Construction c, std::uint64_t p) {
  require_admissible(c, p);
  auto s = construction_shape(c);
  return {p, s.l * p - s.offset, s.n * p * (p - 1)};
}

/// The same order written in the degree: (9/25)(d+3)(d-2),
/// (13/36)(d+2)(d-4) and (6/16)(d+2)(d-2).
inline Rational construction_order_in_degree(Construction c, std::uint64_t d) {
  const Rational D(d);
  switch (c) {
    case Construction::MssCirculant: return make_rational(9, 25) * (D + 3) * (D - 2);
    case Construction::Vetrik: return make_rational(13, 36) * (D + 2) * (D - 4);
    case Construction::MssAbelian: return make_rational(6, 16) * (D + 2) * (D - 2);
  }
  throw Error("unknown construction");
}

/// The construction instance of exactly degree d, when one exists.
inline std::optional<ConstructionOrder> construction_for_degree(Construction c, std::uint64_t d) {
  auto s = construction_shape(c);
  if ((d + s.offset) % s.l != 0) return std::nullopt;
  std::uint64_t p = (d + s.offset) / s.l;
  try {
    return construction_order(c, p);
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct Coefficient {
  Rational value;
  std::string decimal;  // three places
};

/// n / l^2 in lowest terms.
inline Coefficient quadratic_coefficient(std::uint64_t n, std::uint64_t l) {
  if (l < 1) throw Error("l must be >= 1");
  Rational value(BigInt(n), BigInt(l) * l);
  return {value, to_decimal(value, 3)};
}

/// mantissa x 10^exponent
struct DecimalPower {
  std::uint64_t mantissa = 1;
  int exponent = 0;

  std::string str() const { return std::to_string(mantissa) + "e" + std::to_string(exponent); }
  friend bool operator==(const DecimalPower&, const DecimalPower&) = default;
};

struct CongruencePrimeTriple {
  std::uint64_t k;       // modulus of the congruence class
  DecimalPower x0;       // threshold
  Rational epsilon;      // in (0, 1)
};

// Prime-interval triples for x0 = 10^100 used with the three constructions.
inline CongruencePrimeTriple ramare_rumely_mod3() { return {3, {1, 100}, parse_rational("0.001310")}; }
inline CongruencePrimeTriple ramare_rumely_mod13() { return {13, {1, 100}, parse_rational("0.002020")}; }
inline CongruencePrimeTriple ramare_rumely_mod1() { return {1, {1, 100}, parse_rational("0.000001")}; }

struct CullinanHajirResult {
  Rational delta;                 // 2 eps / (1 - eps)
  Rational adjusted;              // base / (1 + delta)^2
  DecimalPower degree_threshold;  // degree multiplier x x0
};

/// Coefficient that holds for every degree past the threshold, given that
/// (x, x(1 + delta)] always holds a prime of the needed class for x > x0.
inline CullinanHajirResult cullinan_hajir_coefficient(const Rational& base, const CongruencePrimeTriple& triple,
                                                      std::uint64_t degree_multiplier = 1) {
  if (base <= 0) throw Error("base coefficient must be positive");
  if (triple.epsilon <= 0 || triple.epsilon >= 1) throw Error("epsilon must lie in (0, 1)");
  if (triple.k < 1) throw Error("k must be >= 1");
  CullinanHajirResult r;
  r.delta = 2 * triple.epsilon / (1 - triple.epsilon);
  const Rational scale = 1 + r.delta;
  r.adjusted = base / (scale * scale);
  r.degree_threshold = {triple.x0.mantissa * degree_multiplier, triple.x0.exponent};
  return r;
}

/// st / (s + t)^2, the coefficient bound for Z_s x Z_t x Z_n.
inline Rational uac_coefficient(std::uint64_t s, std::uint64_t t) {
  if (s < 1 || t < 1) throw Error("s and t must be >= 1");
  return Rational(BigInt(s) * t, BigInt(s + t) * (s + t));
}

struct BoundReport {
  std::uint64_t d = 0;
  std::uint64_t k = 2;
  BigInt mac_upper;
  std::optional<std::int64_t> lac_lower;
  std::map<std::string, std::uint64_t> construction_orders;  // constructions of degree exactly d
  std::optional<Rational> quadratic_coefficient;             // best construction present
};

inline BoundReport bound_report(std::uint64_t d, std::uint64_t k = 2, const std::optional<DeltaTable>& delta = {}) {
  BoundReport r;
  r.d = d;
  r.k = k;
  r.mac_upper = mac_upper(d, k);
  if (delta) r.lac_lower = lac_lower(d, *delta);
  if (k == 2) {
    std::uint64_t best = 0;
    for (auto c : {Construction::MssCirculant, Construction::Vetrik, Construction::MssAbelian}) {
      if (auto inst = construction_for_degree(c, d)) {
        r.construction_orders[to_string(c)] = inst->order;
        if (inst->order > best) {
          best = inst->order;
          r.quadratic_coefficient = construction_coefficient(c);
        }
      }
    }
  }
  return r;
}

} // namespace ddx2
