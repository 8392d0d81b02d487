#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ddx2/algebra.hpp"
#include "ddx2/error.hpp"

namespace ddx2 {

enum class VariantKind { CyclicGalois, AbelianGalois, UnrestrictedCyclic };

inline const char* to_string(VariantKind kind) {
  switch (kind) {
    case VariantKind::CyclicGalois: return "cyclic";
    case VariantKind::AbelianGalois: return "abelian";
    case VariantKind::UnrestrictedCyclic: return "unrestricted";
  }
  return "?";
}

/// Which set is used for the subscript-0 C block.
enum class ZeroBlock { CPlus, CStar };

/// Construction variant: the ambient group family and which self-inverse
/// blocks are present.
struct Variant {
  VariantKind kind = VariantKind::CyclicGalois;
  bool include_c0 = false;
  bool include_bhalf = false;
  ZeroBlock zero_block = ZeroBlock::CPlus;

  static Variant cyclic(bool c0) { return {VariantKind::CyclicGalois, c0, false, ZeroBlock::CPlus}; }
  static Variant abelian(bool c0) { return {VariantKind::AbelianGalois, c0, true, ZeroBlock::CPlus}; }
  static Variant unrestricted(bool c0) {
    return {VariantKind::UnrestrictedCyclic, c0, false, ZeroBlock::CPlus};
  }

  /// The set-count parameter l for m subscript pairs.
  unsigned l_for(unsigned m) const {
    unsigned l = 2 * m + (include_c0 ? 1 : 0);
    return kind == VariantKind::AbelianGalois ? l + 1 : l;
  }

  friend bool operator==(const Variant&, const Variant&) = default;
};

/// Variant and m implied by a set count l, using each family's parity rule
/// for C_0 (circulant: odd l; Abelian: even l; unrestricted: odd l).
struct LayoutForL {
  Variant variant;
  unsigned m;
};

inline LayoutForL layout_for_l(VariantKind kind, unsigned l) {
  switch (kind) {
    case VariantKind::CyclicGalois:
      if (l < 2) throw Error("l must be >= 2 for the cyclic variant");
      return {Variant::cyclic(l % 2 == 1), l / 2};
    case VariantKind::AbelianGalois:
      if (l < 3) throw Error("l must be >= 3 for the Abelian variant");
      return {Variant::abelian(l % 2 == 0), (l - 1) / 2};
    case VariantKind::UnrestrictedCyclic:
      if (l < 2) throw Error("l must be >= 2 for the unrestricted variant");
      return {Variant::unrestricted(l % 2 == 1), l / 2};
  }
  throw Error("unknown variant");
}

/// Index sets selecting A_u (u in U), B_v (v in V) and C_w (w in W) modulo n.
/// W holds 0 exactly when the variant includes C_0; for the Abelian variant
/// n/2 is carried by include_bhalf and never appears in V.
struct SubscriptFamily {
  Variant variant;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> U, V, W;

  std::size_t g_a() const { return U.size(); }
  std::size_t g_b() const { return V.size(); }
  std::size_t g_c() const { return W.size() - (variant.include_c0 ? 1 : 0); }
  std::size_t m() const { return g_a() + g_b() + g_c(); }
  unsigned l() const { return variant.l_for(static_cast<unsigned>(m())); }

  /// Nonzero C subscripts.
  std::vector<std::uint64_t> W_nonzero() const {
    std::vector<std::uint64_t> out;
    for (auto w : W)
      if (w != 0) out.push_back(w);
    return out;
  }

  friend bool operator==(const SubscriptFamily&, const SubscriptFamily&) = default;
};

/// Validates and normalizes (sorts) a family.
inline SubscriptFamily make_family(Variant variant, std::uint64_t n, std::vector<std::uint64_t> U,
                                   std::vector<std::uint64_t> V, std::vector<std::uint64_t> W) {
  if (n < 1) throw BadSubscript("n must be >= 1");
  for (auto* set : {&U, &V, &W}) {
    std::sort(set->begin(), set->end());
    if (std::adjacent_find(set->begin(), set->end()) != set->end()) {
      throw BadSubscript("repeated subscript");
    }
    for (auto s : *set)
      if (s >= n) throw BadSubscript("subscript " + std::to_string(s) + " not below n");
  }
  auto contains = [](const std::vector<std::uint64_t>& s, std::uint64_t x) {
    return std::binary_search(s.begin(), s.end(), x);
  };
  if (contains(U, 0)) throw BadSubscript("A_0 adds nothing; 0 is not allowed in U");
  if (contains(V, 0)) throw BadSubscript("0 is not allowed in V");
  if (contains(W, 0) != variant.include_c0) {
    throw BadSubscript("0 must be in W exactly when C_0 is included");
  }
  switch (variant.kind) {
    case VariantKind::CyclicGalois:
      if (n % 2 == 0) throw VariantViolation("cyclic variant needs odd n");
      if (variant.include_bhalf) throw VariantViolation("B_{n/2} requires the Abelian variant");
      break;
    case VariantKind::AbelianGalois: {
      if (n % 2 != 0) throw VariantViolation("Abelian variant needs even n");
      if (!variant.include_bhalf) throw VariantViolation("Abelian variant always includes B_{n/2}");
      const std::uint64_t half = n / 2;
      if (contains(U, half) || contains(V, half) || contains(W, half)) {
        throw BadSubscript("n/2 is reserved for B_{n/2}");
      }
      break;
    }
    case VariantKind::UnrestrictedCyclic:
      if (!U.empty()) throw VariantViolation("unrestricted variant has no A sets");
      if (variant.include_bhalf) throw VariantViolation("B_{n/2} requires the Abelian variant");
      break;
  }
  return SubscriptFamily{variant, n, std::move(U), std::move(V), std::move(W)};
}

/// Builds a family from a row written the way the published tables list it:
/// n/2 inside V marks B_{n/2} (Abelian), 0 inside W marks C_0.
inline SubscriptFamily family_from_table(VariantKind kind, std::uint64_t n, std::vector<std::uint64_t> U,
                                         std::vector<std::uint64_t> V, std::vector<std::uint64_t> W) {
  bool c0 = std::find(W.begin(), W.end(), 0) != W.end();
  Variant variant = kind == VariantKind::CyclicGalois    ? Variant::cyclic(c0)
                    : kind == VariantKind::AbelianGalois ? Variant::abelian(c0)
                                                         : Variant::unrestricted(c0);
  if (kind == VariantKind::AbelianGalois) {
    if (n % 2 != 0) throw VariantViolation("Abelian variant needs even n");
    std::erase(V, n / 2);
  }
  return make_family(variant, n, std::move(U), std::move(V), std::move(W));
}

struct GaloisParams {
  std::uint64_t p;
};
struct ProductParams {
  std::uint64_t s, t;
};
/// The field order p for the Galois variants, or (s, t) for Z_s x Z_t x Z_n.
using Ambient = std::variant<GaloisParams, ProductParams>;

inline GroupSpec group_for(const SubscriptFamily& family, const Ambient& ambient) {
  if (family.variant.kind == VariantKind::UnrestrictedCyclic) {
    const auto* st = std::get_if<ProductParams>(&ambient);
    if (!st) throw VariantViolation("unrestricted variant needs (s, t)");
    return GroupSpec::product(st->s, st->t, family.n);
  }
  const auto* galois = std::get_if<GaloisParams>(&ambient);
  if (!galois) throw VariantViolation("Galois variants need a prime p");
  return GroupSpec::galois(galois->p, family.n);
}

/// An inverse-closed, identity-free subset of a group, kept sorted by dense
/// index.
class ConnectionSet {
public:
  static ConnectionSet make(GroupSpec spec, std::vector<GroupElement> elements) {
    for (const auto& e : elements) {
      if (!spec.conforms(e)) throw ShapeMismatch("element " + to_string(e) + " does not conform");
    }
    std::sort(elements.begin(), elements.end(), [&](const GroupElement& a, const GroupElement& b) {
      return spec.index_of(a) < spec.index_of(b);
    });
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    ConnectionSet set(std::move(spec), std::move(elements));
    if (set.elements_.empty()) throw EmptyConnectionSet();
    const GroupElement e = set.spec_.identity();
    for (const auto& x : set.elements_) {
      if (x == e) throw InvalidConnectionSet("connection set contains the identity");
      if (!set.contains(set.spec_.inverse(x))) {
        throw InvalidConnectionSet("connection set is not inverse-closed at " + to_string(x));
      }
    }
    return set;
  }

  const GroupSpec& spec() const { return spec_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const std::vector<std::uint64_t>& indices() const { return indices_; }
  std::size_t degree() const { return elements_.size(); }

  bool contains(const GroupElement& x) const {
    if (!spec_.conforms(x)) return false;
    return std::binary_search(indices_.begin(), indices_.end(), spec_.index_of(x));
  }

  /// Union with further elements; the result is revalidated.
  ConnectionSet with(const std::vector<GroupElement>& extra) const {
    std::vector<GroupElement> all = elements_;
    all.insert(all.end(), extra.begin(), extra.end());
    return make(spec_, std::move(all));
  }

private:
  ConnectionSet(GroupSpec spec, std::vector<GroupElement> elements)
      : spec_(std::move(spec)), elements_(std::move(elements)) {
    indices_.reserve(elements_.size());
    for (const auto& x : elements_) indices_.push_back(spec_.index_of(x));
  }

  GroupSpec spec_;
  std::vector<GroupElement> elements_;
  std::vector<std::uint64_t> indices_;
};

inline bool is_inverse_closed(const GroupSpec& spec, const std::vector<GroupElement>& elements) {
  std::vector<GroupElement> sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  return std::all_of(elements.begin(), elements.end(), [&](const GroupElement& x) {
    return std::binary_search(sorted.begin(), sorted.end(), spec.inverse(x));
  });
}

/// Circulant connection set on Z_n: +-g for each generator, plus n/2 when
/// `self_inverse` is set.
inline ConnectionSet circulant_set(std::uint64_t n, const std::vector<std::uint64_t>& generators,
                                   bool self_inverse = false) {
  std::vector<GroupElement> elements;
  for (auto g : generators) {
    if (g == 0 || g >= n) throw BadSubscript("generator " + std::to_string(g) + " out of range");
    elements.push_back({g});
    elements.push_back({n - g});
  }
  if (self_inverse) {
    if (n % 2 != 0) throw BadSubscript("n/2 requires even n");
    elements.push_back({n / 2});
  }
  return ConnectionSet::make(GroupSpec::cyclic(n), std::move(elements));
}

enum class BlockKind { A, B, CStar, CPlus };

/// One building block. Over F* x F+ x Z_n:
///   A_u = {(x,x,u), (x^-1,-x,-u)}, B_v = {(x,0,v), (x^-1,0,-v)},
///   C_w = {(1,y,w), (1,-y,-w)} with y over F* (CStar) or F+ (CPlus).
/// Over Z_s x Z_t x Z_n: B_v = {(x,0,+-v)}, C_w = {(0,y,+-w)}; A is undefined.
/// C_0^+ and B_0 contain the identity; assemble() drops it.
inline std::vector<GroupElement> build_block(const GroupSpec& spec, BlockKind kind, std::uint64_t subscript) {
  if (spec.rank() != 3) throw ShapeMismatch("blocks live in a three-component group");
  const std::uint64_t n = spec.components()[2].modulus;
  if (spec.components()[2].kind != ComponentKind::Cyclic) throw ShapeMismatch("third component must be Z_n");
  if (subscript >= n) throw BadSubscript("subscript " + std::to_string(subscript) + " not below n");
  const std::uint64_t neg = subscript == 0 ? 0 : n - subscript;
  std::vector<GroupElement> out;

  if (spec.has_galois_structure()) {
    const PrimeField& f = spec.field(0);
    const std::uint64_t p = f.order();
    switch (kind) {
      case BlockKind::A:
        if (subscript == 0) throw BadSubscript("A_0 is never used: (x,y,0) already comes from any A_u");
        for (std::uint64_t x = 1; x < p; ++x) {
          out.push_back({x, x, subscript});
          out.push_back({f.inv(x), f.neg(x), neg});
        }
        break;
      case BlockKind::B:
        for (std::uint64_t x = 1; x < p; ++x) {
          out.push_back({x, 0, subscript});
          out.push_back({f.inv(x), 0, neg});
        }
        break;
      case BlockKind::CStar:
      case BlockKind::CPlus:
        for (std::uint64_t y = kind == BlockKind::CStar ? 1 : 0; y < p; ++y) {
          out.push_back({1, y, subscript});
          out.push_back({1, f.neg(y), neg});
        }
        break;
    }
  } else {
    const auto& c = spec.components();
    if (c[0].kind != ComponentKind::Cyclic || c[1].kind != ComponentKind::Cyclic) {
      throw ShapeMismatch("expected F* x F+ x Z_n or Z_s x Z_t x Z_n");
    }
    const std::uint64_t s = c[0].modulus;
    const std::uint64_t t = c[1].modulus;
    switch (kind) {
      case BlockKind::A:
        throw VariantViolation("A blocks need Galois structure");
      case BlockKind::B:
        for (std::uint64_t x = 0; x < s; ++x) {
          out.push_back({x, 0, subscript});
          out.push_back({x == 0 ? 0 : s - x, 0, neg});
        }
        break;
      case BlockKind::CStar:
      case BlockKind::CPlus:
        for (std::uint64_t y = kind == BlockKind::CStar ? 1 : 0; y < t; ++y) {
          out.push_back({0, y, subscript});
          out.push_back({0, y == 0 ? 0 : t - y, neg});
        }
        break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// b_u(1) and its inverse for each u in U, plus b_{u-u'-w'}(1) and inverse
/// for each ordered pair u != u' with w' = min(W). These cover the x = 1 and
/// y = 0 exceptions of the pairwise products.
inline std::vector<GroupElement> standard_extras(const SubscriptFamily& family) {
  std::vector<GroupElement> out;
  if (family.U.empty()) return out;
  if (family.U.size() >= 2 && family.W.empty()) throw MissingW();
  const std::uint64_t n = family.n;
  auto add_b = [&](std::uint64_t z) {
    z %= n;
    out.push_back({1, 0, z});
    out.push_back({1, 0, z == 0 ? 0 : n - z});
  };
  for (auto u : family.U) add_b(u);
  if (family.U.size() >= 2) {
    const std::uint64_t w0 = family.W.front();
    for (auto u : family.U) {
      for (auto u2 : family.U) {
        if (u == u2) continue;
        add_b((u + 2 * n - u2 - w0) % n);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  // b_0(1) is the identity
  std::erase(out, GroupElement{1, 0, 0});
  return out;
}

/// Union of the family's blocks (plus C_0 and B_{n/2} as flagged), the
/// extras and their inverses, without the identity.
inline ConnectionSet assemble(const SubscriptFamily& family, const Ambient& ambient,
                              const std::vector<GroupElement>& extras) {
  const std::uint64_t n = family.n;
  switch (family.variant.kind) {
    case VariantKind::CyclicGalois: {
      auto p = std::get<GaloisParams>(ambient).p;
      if (!is_cyclic_product(p, n)) {
        throw VariantViolation("p=" + std::to_string(p) + ", p-1 and n=" + std::to_string(n) +
                               " are not pairwise coprime");
      }
      break;
    }
    case VariantKind::AbelianGalois:
      if (n % 2 != 0) throw VariantViolation("Abelian variant needs even n");
      break;
    case VariantKind::UnrestrictedCyclic:
      if (!family.U.empty()) throw VariantViolation("unrestricted variant has no A sets");
      break;
  }
  GroupSpec spec = group_for(family, ambient);
  std::vector<GroupElement> all;
  auto append = [&](std::vector<GroupElement> block) {
    all.insert(all.end(), block.begin(), block.end());
  };
  for (auto u : family.U) append(build_block(spec, BlockKind::A, u));
  for (auto v : family.V) append(build_block(spec, BlockKind::B, v));
  for (auto w : family.W_nonzero()) append(build_block(spec, BlockKind::CPlus, w));
  if (family.variant.include_c0) {
    append(build_block(spec, family.variant.zero_block == ZeroBlock::CStar ? BlockKind::CStar : BlockKind::CPlus, 0));
  }
  if (family.variant.include_bhalf) append(build_block(spec, BlockKind::B, n / 2));
  for (const auto& x : extras) {
    if (!spec.conforms(x)) throw ShapeMismatch("extra " + to_string(x) + " does not conform");
    all.push_back(x);
    all.push_back(spec.inverse(x));
  }
  std::erase(all, spec.identity());
  if (all.empty()) throw EmptyConnectionSet();
  return ConnectionSet::make(std::move(spec), std::move(all));
}

/// Degree of the blocks alone (identity excluded), before extras.
inline std::uint64_t block_degree(const SubscriptFamily& family, const Ambient& ambient) {
  if (family.variant.kind == VariantKind::UnrestrictedCyclic) {
    auto [s, t] = std::get<ProductParams>(ambient);
    std::uint64_t d = 2 * s * family.g_b() + 2 * t * family.g_c();
    if (family.variant.include_c0) d += t - 1;
    return d;
  }
  const std::uint64_t p = std::get<GaloisParams>(ambient).p;
  std::uint64_t d = 2 * (p - 1) * (family.g_a() + family.g_b()) + 2 * p * family.g_c();
  if (family.variant.include_c0) d += p - 1;
  if (family.variant.include_bhalf) d += p - 1;
  return d;
}

} // namespace ddx2
