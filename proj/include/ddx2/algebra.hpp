#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "ddx2/error.hpp"

namespace ddx2 {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

} // namespace detail

/// Deterministic Miller-Rabin. The first thirteen primes as witnesses are
/// exact below 3.3e24, which covers every 64-bit input.
inline bool is_prime(std::uint64_t n) {
  constexpr std::array<std::uint64_t, 13> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  if (n < 2) return false;
  for (auto w : witnesses) {
    if (n == w) return true;
    if (n % w == 0) return false;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (auto a : witnesses) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// The prime field GF(p). Residues are plain integers in [0, p).
class PrimeField {
public:
  std::uint64_t order() const { return p_; }
  std::uint64_t multiplicative_order() const { return p_ - 1; }
  std::uint64_t additive_order() const { return p_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return detail::mulmod(a, b, p_); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const { return detail::powmod(a, e, p_); }

  std::uint64_t inv(std::uint64_t a) const {
    if (a % p_ == 0) throw Error("zero has no multiplicative inverse");
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
  explicit PrimeField(std::uint64_t p) : p_(p) {}
  friend PrimeField make_prime_field(std::uint64_t p);

  std::uint64_t p_;
};

inline PrimeField make_prime_field(std::uint64_t p) {
  if (!is_prime(p)) throw NotPrime(p);
  return PrimeField(p);
}

enum class ComponentKind { FieldMultiplicative, FieldAdditive, Cyclic };

/// One cyclic factor of a product group: F*, F+ of GF(p), or Z_n.
struct Component {
  ComponentKind kind;
  std::uint64_t modulus;

  static Component multiplicative(std::uint64_t p) { return {ComponentKind::FieldMultiplicative, p}; }
  static Component additive(std::uint64_t p) { return {ComponentKind::FieldAdditive, p}; }
  static Component cyclic(std::uint64_t n) { return {ComponentKind::Cyclic, n}; }

  std::uint64_t order() const {
    return kind == ComponentKind::FieldMultiplicative ? modulus - 1 : modulus;
  }

  friend bool operator==(const Component&, const Component&) = default;
};

struct GroupElement {
  std::vector<std::uint64_t> coords;

  GroupElement() = default;
  GroupElement(std::initializer_list<std::uint64_t> c) : coords(c) {}
  explicit GroupElement(std::vector<std::uint64_t> c) : coords(std::move(c)) {}

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

inline std::string to_string(const GroupElement& e) {
  std::string out = "(";
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(e.coords[i]);
  }
  return out + ")";
}

/// Largest group order accepted by dense indexing and the coverage bitsets.
inline constexpr std::uint64_t kMaxIndexedOrder = std::uint64_t{1} << 31;

/// A finite Abelian group written as an ordered direct product of cyclic
/// components. Elements are indexed densely in lexicographic coordinate
/// order; multiplicative coordinates 1..p-1 map to digits 0..p-2.
class GroupSpec {
public:
  explicit GroupSpec(std::vector<Component> components) : components_(std::move(components)) {
    if (components_.empty()) throw ShapeMismatch("group needs at least one component");
    fields_.reserve(components_.size());
    strides_.assign(components_.size(), 1);
    unsigned __int128 total = 1;
    for (const auto& c : components_) {
      if (c.kind == ComponentKind::Cyclic) {
        if (c.modulus < 1) throw ShapeMismatch("cyclic component order must be >= 1");
        fields_.push_back(std::nullopt);
      } else {
        fields_.push_back(make_prime_field(c.modulus));
      }
      total *= c.order();
      if (total > (static_cast<unsigned __int128>(1) << 62)) throw TooLarge("group order exceeds 2^62");
    }
    order_ = static_cast<std::uint64_t>(total);
    for (std::size_t i = components_.size(); i-- > 1;) {
      strides_[i - 1] = strides_[i] * components_[i].order();
    }
  }

  /// F* x F+ x Z_n over GF(p).
  static GroupSpec galois(std::uint64_t p, std::uint64_t n) {
    return GroupSpec({Component::multiplicative(p), Component::additive(p), Component::cyclic(n)});
  }
  /// Z_s x Z_t x Z_n.
  static GroupSpec product(std::uint64_t s, std::uint64_t t, std::uint64_t n) {
    return GroupSpec({Component::cyclic(s), Component::cyclic(t), Component::cyclic(n)});
  }
  static GroupSpec cyclic(std::uint64_t n) { return GroupSpec({Component::cyclic(n)}); }

  const std::vector<Component>& components() const { return components_; }
  std::size_t rank() const { return components_.size(); }
  std::uint64_t order() const { return order_; }

  bool has_galois_structure() const {
    return components_.size() >= 2 &&
           components_[0].kind == ComponentKind::FieldMultiplicative &&
           components_[1].kind == ComponentKind::FieldAdditive &&
           components_[0].modulus == components_[1].modulus;
  }

  const PrimeField& field(std::size_t component) const {
    if (!fields_.at(component)) throw ShapeMismatch("component has no field structure");
    return *fields_[component];
  }

  void require_indexable() const {
    if (order_ > kMaxIndexedOrder) {
      throw TooLarge("group order " + std::to_string(order_) + " exceeds 2^31");
    }
  }

  bool conforms(const GroupElement& a) const {
    if (a.coords.size() != components_.size()) return false;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto& c = components_[i];
      std::uint64_t x = a.coords[i];
      if (c.kind == ComponentKind::FieldMultiplicative) {
        if (x < 1 || x >= c.modulus) return false;
      } else if (x >= c.modulus) {
        return false;
      }
    }
    return true;
  }

  GroupElement identity() const {
    GroupElement e;
    e.coords.reserve(components_.size());
    for (const auto& c : components_) {
      e.coords.push_back(c.kind == ComponentKind::FieldMultiplicative ? 1 : 0);
    }
    return e;
  }

  GroupElement compose(const GroupElement& a, const GroupElement& b) const {
    check(a);
    check(b);
    GroupElement out;
    out.coords.resize(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) {
      out.coords[i] = compose_coord(i, a.coords[i], b.coords[i]);
    }
    return out;
  }

  GroupElement inverse(const GroupElement& a) const {
    check(a);
    GroupElement out;
    out.coords.resize(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) {
      out.coords[i] = inverse_coord(i, a.coords[i]);
    }
    return out;
  }

  /// a^k by repeated squaring.
  GroupElement power(const GroupElement& a, std::uint64_t k) const {
    GroupElement result = identity();
    GroupElement base = a;
    while (k > 0) {
      if (k & 1) result = compose(result, base);
      base = compose(base, base);
      k >>= 1;
    }
    return result;
  }

  std::uint64_t index_of(const GroupElement& a) const {
    check(a);
    return index_of_coords(a.coords);
  }

  GroupElement element_at(std::uint64_t index) const {
    if (index >= order_) throw ShapeMismatch("index out of range");
    GroupElement out;
    out.coords.resize(components_.size());
    coords_at(index, out.coords);
    return out;
  }

  // Allocation-free primitives for the coverage hot loops. Inputs are
  // assumed to conform.
  std::uint64_t compose_coord(std::size_t i, std::uint64_t x, std::uint64_t y) const {
    const auto& c = components_[i];
    switch (c.kind) {
      case ComponentKind::FieldMultiplicative:
        return detail::mulmod(x, y, c.modulus);
      case ComponentKind::FieldAdditive:
      case ComponentKind::Cyclic: {
        std::uint64_t s = x + y;
        return s >= c.modulus ? s - c.modulus : s;
      }
    }
    return 0;
  }

  std::uint64_t inverse_coord(std::size_t i, std::uint64_t x) const {
    const auto& c = components_[i];
    if (c.kind == ComponentKind::FieldMultiplicative) return fields_[i]->inv(x);
    return x == 0 ? 0 : c.modulus - x;
  }

  std::uint64_t index_of_coords(std::span<const std::uint64_t> coords) const {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      std::uint64_t digit = coords[i];
      if (components_[i].kind == ComponentKind::FieldMultiplicative) digit -= 1;
      index += digit * strides_[i];
    }
    return index;
  }

  void coords_at(std::uint64_t index, std::span<std::uint64_t> out) const {
    for (std::size_t i = 0; i < components_.size(); ++i) {
      std::uint64_t digit = index / strides_[i];
      index %= strides_[i];
      out[i] = components_[i].kind == ComponentKind::FieldMultiplicative ? digit + 1 : digit;
    }
  }

  std::uint64_t product_index(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) const {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      std::uint64_t digit = compose_coord(i, a[i], b[i]);
      if (components_[i].kind == ComponentKind::FieldMultiplicative) digit -= 1;
      index += digit * strides_[i];
    }
    return index;
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.components_ == b.components_;
  }

private:
  void check(const GroupElement& a) const {
    if (!conforms(a)) throw ShapeMismatch("element " + to_string(a) + " does not conform to group");
  }

  std::vector<Component> components_;
  std::vector<std::optional<PrimeField>> fields_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t order_ = 1;
};

/// Every element of `spec` once, in lexicographic coordinate order.
inline auto enumerate(const GroupSpec& spec) {
  spec.require_indexable();
  return std::views::iota(std::uint64_t{0}, spec.order()) |
         std::views::transform([spec](std::uint64_t i) { return spec.element_at(i); });
}

/// True when F* x F+ x Z_n over GF(p) is cyclic, i.e. p, p-1 and n are
/// pairwise coprime.
inline bool is_cyclic_product(std::uint64_t p, std::uint64_t n) {
  if (!is_prime(p)) throw NotPrime(p);
  if (n < 1) throw ShapeMismatch("n must be >= 1");
  return std::gcd(p, n) == 1 && std::gcd(p - 1, n) == 1;
}

/// Order of `a`, found by stepping through its powers.
inline std::uint64_t element_order(const GroupSpec& spec, const GroupElement& a) {
  const GroupElement e = spec.identity();
  GroupElement x = a;
  std::uint64_t k = 1;
  while (x != e) {
    x = spec.compose(x, a);
    ++k;
  }
  return k;
}

} // namespace ddx2
