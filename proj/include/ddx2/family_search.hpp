#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "ddx2/algebra.hpp"
#include "ddx2/connection.hpp"
#include "ddx2/coverage.hpp"
#include "ddx2/error.hpp"
#include "ddx2/parallel.hpp"
#include "ddx2/rational.hpp"

namespace ddx2 {

// ---------------------------------------------------------------------------
// Residue contribution schedule
//
// Each row names which Z_n residues a pair of block families (or a single
// family against a self-inverse block) reaches. The variants differ only in
// their rows.

enum class Role { U, V, W };  // W: nonzero C subscripts
enum class Anchor { Zero, Half };

struct ScheduleRow {
  enum class Type {
    Cross,       // s in a, t in b: s+t, s-t, -s+t, -s-t
    Difference,  // unordered s != t in a: s-t, t-s
    Shifted,     // s in a: anchor+s, anchor-s
    Constant,    // anchor once, when `a` becomes nonempty (or always if !gated)
  };
  Type type;
  Role a = Role::U;
  Role b = Role::U;
  Anchor anchor = Anchor::Zero;
  bool needs_c0 = false;
  bool gated = false;
};

inline const std::vector<ScheduleRow>& contribution_schedule(VariantKind kind) {
  using T = ScheduleRow::Type;
  static const std::vector<ScheduleRow> cyclic{
      {T::Cross, Role::U, Role::V},
      {T::Cross, Role::U, Role::W},
      {T::Cross, Role::V, Role::W},
      {T::Difference, Role::U},
      // (x,y,0) from two elements of one A_u
      {T::Constant, Role::U, Role::U, Anchor::Zero, false, true},
      {T::Shifted, Role::U, Role::U, Anchor::Zero, true},
      {T::Shifted, Role::V, Role::V, Anchor::Zero, true},
  };
  static const std::vector<ScheduleRow> abelian{
      {T::Cross, Role::U, Role::V},
      {T::Cross, Role::U, Role::W},
      {T::Cross, Role::V, Role::W},
      {T::Difference, Role::U},
      {T::Constant, Role::U, Role::U, Anchor::Zero, false, true},
      // against B_{n/2}
      {T::Shifted, Role::U, Role::U, Anchor::Half},
      {T::Shifted, Role::W, Role::W, Anchor::Half},
      // against C_0
      {T::Shifted, Role::U, Role::U, Anchor::Zero, true},
      {T::Shifted, Role::V, Role::V, Anchor::Zero, true},
      {T::Constant, Role::U, Role::U, Anchor::Half, true, false},
  };
  static const std::vector<ScheduleRow> unrestricted{
      {T::Cross, Role::V, Role::W},
      {T::Shifted, Role::V, Role::V, Anchor::Zero, true},
  };
  switch (kind) {
    case VariantKind::CyclicGalois: return cyclic;
    case VariantKind::AbelianGalois: return abelian;
    case VariantKind::UnrestrictedCyclic: return unrestricted;
  }
  return cyclic;
}

namespace detail {

struct PlacedSets {
  std::vector<std::uint64_t> sets[3];
  const std::vector<std::uint64_t>& of(Role r) const { return sets[static_cast<int>(r)]; }
  std::vector<std::uint64_t>& of(Role r) { return sets[static_cast<int>(r)]; }
};

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) { return (a + b) % n; }
inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) { return (a + n - b % n) % n; }

// Residues contributed before any subscript is placed.
template <class Emit>
void initial_contributions(const std::vector<ScheduleRow>& schedule, std::uint64_t n, bool c0, Emit&& emit) {
  for (const auto& row : schedule) {
    if (row.type != ScheduleRow::Type::Constant || row.gated) continue;
    if (row.needs_c0 && !c0) continue;
    emit(row.anchor == Anchor::Zero ? 0 : n / 2);
  }
}

// Residues newly contributed when `x` joins role `role`, given the
// subscripts already placed (which must not yet include x).
template <class Emit>
void new_contributions(const std::vector<ScheduleRow>& schedule, std::uint64_t n, bool c0, Role role,
                       std::uint64_t x, const PlacedSets& placed, Emit&& emit) {
  using T = ScheduleRow::Type;
  const std::uint64_t half = n / 2;
  for (const auto& row : schedule) {
    if (row.needs_c0 && !c0) continue;
    switch (row.type) {
      case T::Cross: {
        if (row.a != role && row.b != role) break;
        auto cross = [&](Role other) {
          for (auto t : placed.of(other)) {
            emit(add_mod(x, t, n));
            emit(sub_mod(x, t, n));
            emit(sub_mod(t, x, n));
            emit(sub_mod(0, add_mod(x, t, n), n));
          }
        };
        if (row.a == role) cross(row.b);
        if (row.b == role && row.a != row.b) cross(row.a);
        break;
      }
      case T::Difference:
        if (row.a != role) break;
        for (auto t : placed.of(role)) {
          emit(sub_mod(x, t, n));
          emit(sub_mod(t, x, n));
        }
        break;
      case T::Shifted: {
        if (row.a != role) break;
        std::uint64_t anchor = row.anchor == Anchor::Zero ? 0 : half;
        emit(add_mod(anchor, x, n));
        emit(sub_mod(anchor, x, n));
        break;
      }
      case T::Constant:
        if (row.gated && row.a == role && placed.of(role).empty()) {
          emit(row.anchor == Anchor::Zero ? 0 : half);
        }
        break;
    }
  }
}

template <class Emit>
void family_contributions(const SubscriptFamily& family, Emit&& emit) {
  const auto& schedule = contribution_schedule(family.variant.kind);
  const bool c0 = family.variant.include_c0;
  initial_contributions(schedule, family.n, c0, emit);
  PlacedSets placed;
  auto place = [&](Role role, const std::vector<std::uint64_t>& values) {
    for (auto x : values) {
      new_contributions(schedule, family.n, c0, role, x, placed, emit);
      placed.of(role).push_back(x);
    }
  };
  place(Role::U, family.U);
  place(Role::V, family.V);
  place(Role::W, family.W_nonzero());
}

} // namespace detail

/// The multiset of Z_n residues reached by the family's designated pair
/// products.
struct ResidueCoverage {
  std::uint64_t n = 0;
  std::vector<std::uint32_t> counts;
  std::vector<std::uint64_t> duplicates;
  std::vector<std::uint64_t> missing;

  std::uint64_t total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }
  /// Every residue reached at least once.
  bool covers() const { return missing.empty(); }
  bool duplicate_free() const { return duplicates.empty(); }
  /// Every residue reached exactly once.
  bool perfect() const { return covers() && duplicate_free(); }

  friend bool operator==(const ResidueCoverage&, const ResidueCoverage&) = default;
};

inline ResidueCoverage residue_coverage(const SubscriptFamily& family) {
  ResidueCoverage rc;
  rc.n = family.n;
  rc.counts.assign(family.n, 0);
  detail::family_contributions(family, [&](std::uint64_t r) { ++rc.counts[r]; });
  for (std::uint64_t r = 0; r < family.n; ++r) {
    if (rc.counts[r] == 0) rc.missing.push_back(r);
    if (rc.counts[r] > 1) rc.duplicates.push_back(r);
  }
  return rc;
}

/// Closed-form size of the residue multiset for a split (g_a, g_b, g_c).
inline std::uint64_t residue_count_formula(VariantKind kind, bool c0, std::uint64_t ga, std::uint64_t gb,
                                           std::uint64_t gc) {
  const std::uint64_t zero = ga > 0 ? 1 : 0;
  const std::uint64_t base = 4 * ga * gb + 4 * gb * gc + 4 * ga * gc + ga * (ga - (ga > 0 ? 1 : 0)) + zero;
  switch (kind) {
    case VariantKind::CyclicGalois:
      return base + (c0 ? 2 * ga + 2 * gb : 0);
    case VariantKind::AbelianGalois:
      return base + 2 * ga + 2 * gc + (c0 ? 2 * ga + 2 * gb + 1 : 0);
    case VariantKind::UnrestrictedCyclic:
      return 4 * gb * gc + (c0 ? 2 * gb : 0);
  }
  return 0;
}

/// Every u - u' (u != u' in U) lies in +-V' or +-V' +- V' mod n, where V'
/// is V plus n/2 when B_{n/2} is present. Otherwise whole b_u(x) families
/// would be needed and the degree grows beyond the block count.
inline bool is_degree_exact(const SubscriptFamily& family) {
  if (family.U.size() < 2) return true;
  const std::uint64_t n = family.n;
  std::vector<std::uint64_t> v = family.V;
  if (family.variant.include_bhalf) v.push_back(n / 2);
  std::vector<char> reach(n, 0);
  for (auto a : v) {
    reach[a % n] = reach[(n - a % n) % n] = 1;
    for (auto b : v) {
      reach[(a + b) % n] = 1;
      reach[(a + n - b) % n] = 1;
      reach[(2 * n - a - b) % n] = 1;
    }
  }
  for (auto u : family.U)
    for (auto u2 : family.U)
      if (u != u2 && !reach[(u + n - u2) % n]) return false;
  return true;
}

/// Real upper bound on n for m subscript pairs, with the split that attains it.
struct CapResult {
  Rational cap;
  Rational g_a, g_b, g_c;
};

inline CapResult closed_form_cap(unsigned m, const Variant& variant) {
  if (m < 1) throw Error("m must be >= 1");
  const Rational M(m);
  auto r = [](std::int64_t a, std::int64_t b) { return make_rational(a, b); };
  switch (variant.kind) {
    case VariantKind::CyclicGalois:
      if (!variant.include_c0) {
        return {(12 * M * M - 4 * M + 9) / 8, (2 * M - 1) / 4, (2 * M + 1) / 8, (2 * M + 1) / 8};
      }
      return {(6 * M * M + 4 * M + 5) / 4, M / 2, (M + 1) / 4, (M - 1) / 4};
    case VariantKind::AbelianGalois:
      if (!variant.include_c0) {
        return {(6 * M * M + 4 * M + 3) / 4, M / 2, (M - 1) / 4, (M + 1) / 4};
      }
      return {(12 * M * M + 20 * M + 17) / 8, (2 * M + 1) / 4, (2 * M - 1) / 8, (2 * M - 1) / 8};
    case VariantKind::UnrestrictedCyclic:
      return {M * M + M + r(1, 4), Rational(0), (2 * M + 1) / 4, (2 * M - 1) / 4};
  }
  throw Error("unknown variant");
}

inline CapResult closed_form_cap_for_l(VariantKind kind, unsigned l) {
  auto layout = layout_for_l(kind, l);
  return closed_form_cap(layout.m, layout.variant);
}

/// Largest admissible n not above the cap: odd for the circulant variant,
/// even for the Abelian one.
inline std::uint64_t integer_cap(const CapResult& cap, VariantKind kind) {
  BigInt floor_value = boost::multiprecision::numerator(cap.cap) / boost::multiprecision::denominator(cap.cap);
  auto n = floor_value.convert_to<std::uint64_t>();
  if (kind == VariantKind::CyclicGalois && n % 2 == 0 && n > 0) --n;
  if (kind == VariantKind::AbelianGalois && n % 2 == 1) --n;
  return n;
}

/// Orbit representative under unit scaling of all subscripts (negation
/// included) with V and W folded into [0, n/2] since B_{-v} = B_v and
/// C_{-w} = C_w.
inline SubscriptFamily canonical_family(const SubscriptFamily& family) {
  const std::uint64_t n = family.n;
  auto fold = [n](std::uint64_t x) { return std::min(x, (n - x) % n); };
  SubscriptFamily best = family;
  bool have = false;
  for (std::uint64_t k = 1; k < std::max<std::uint64_t>(n, 2); ++k) {
    if (std::gcd(k, n) != 1) continue;
    SubscriptFamily cand = family;
    for (auto& u : cand.U) u = k * u % n;
    for (auto& v : cand.V) v = fold(k * v % n);
    for (auto& w : cand.W) w = fold(k * w % n);
    std::sort(cand.U.begin(), cand.U.end());
    std::sort(cand.V.begin(), cand.V.end());
    std::sort(cand.W.begin(), cand.W.end());
    if (!have || std::tie(cand.U, cand.V, cand.W) < std::tie(best.U, best.V, best.W)) {
      best = std::move(cand);
      have = true;
    }
  }
  return best;
}

struct FamilySearchOptions {
  std::optional<std::uint64_t> n_start;
  unsigned jobs = 1;
  Deadline deadline;
  bool require_degree_exact = false;
  /// Keep only duplicate-free families instead of all covering ones.
  bool require_perfect = false;
  /// Let one residue serve in more than one role (e.g. u in U and in V).
  bool allow_shared_subscripts = false;
  std::function<void(std::uint64_t n)> on_order;  // called before each n
};

struct FamilySearchResult {
  unsigned l = 0;
  Variant variant;
  unsigned m = 0;
  std::uint64_t n = 0;                      // 0 when nothing was found
  std::vector<SubscriptFamily> witnesses;   // canonical, sorted
};

namespace detail {

struct Split {
  std::size_t ga, gb, gc;
};

class FamilyEnumerator {
public:
  FamilyEnumerator(Variant variant, std::uint64_t n, Split split, const FamilySearchOptions& options)
      : variant_(variant), n_(n), split_(split), options_(options),
        schedule_(contribution_schedule(variant.kind)) {
    const std::uint64_t formula =
        residue_count_formula(variant.kind, variant.include_c0, split.ga, split.gb, split.gc);
    slack_ = static_cast<std::int64_t>(formula) - static_cast<std::int64_t>(n);
    for (std::uint64_t x = 1; x < n; ++x) {
      if (variant.kind == VariantKind::AbelianGalois && 2 * x == n) continue;
      u_pool_.push_back(x);
      if (2 * x < n) vw_pool_.push_back(x);
    }
    want_[0] = split.ga;
    want_[1] = split.gb;
    want_[2] = split.gc;
    counts_.assign(n, 0);
  }

  bool feasible() const {
    return slack_ >= 0 && u_pool_.size() >= split_.ga && vw_pool_.size() >= split_.gb &&
           vw_pool_.size() >= split_.gc;
  }

  Role first_role() const {
    if (want_[0]) return Role::U;
    if (want_[1]) return Role::V;
    return Role::W;
  }

  const std::vector<std::uint64_t>& pool(Role r) const { return r == Role::U ? u_pool_ : vw_pool_; }

  // Enumerates every family whose first subscript (in role order) is
  // `first`, appending canonical witnesses.
  void run_from(std::uint64_t first, std::vector<SubscriptFamily>& out) {
    out_ = &out;
    std::fill(counts_.begin(), counts_.end(), 0);
    dups_ = 0;
    trail_.clear();
    placed_ = {};
    initial_contributions(schedule_, n_, variant_.include_c0, [&](std::uint64_t r) { bump(r); });
    if (dups_ > slack_) return;
    if (split_.ga + split_.gb + split_.gc == 0) {
      leaf();
      return;
    }
    Role role = first_role();
    std::size_t mark = trail_.size();
    if (place(role, first)) descend(role, first);
    unplace(role, mark);
  }

private:
  void bump(std::uint64_t r) {
    if (counts_[r]++ > 0) ++dups_;
    trail_.push_back(r);
  }

  bool place(Role role, std::uint64_t x) {
    new_contributions(schedule_, n_, variant_.include_c0, role, x, placed_, [&](std::uint64_t r) { bump(r); });
    placed_.of(role).push_back(x);
    return dups_ <= slack_;
  }

  void unplace(Role role, std::size_t mark) {
    placed_.of(role).pop_back();
    while (trail_.size() > mark) {
      std::uint64_t r = trail_.back();
      trail_.pop_back();
      if (--counts_[r] > 0) --dups_;
    }
  }

  bool used(std::uint64_t x) const {
    // B_v and C_v are different sets in the unrestricted group, and v = w is
    // the only way residue 0 gets reached there.
    if (options_.allow_shared_subscripts || variant_.kind == VariantKind::UnrestrictedCyclic) return false;
    for (const auto& s : placed_.sets)
      if (std::find(s.begin(), s.end(), x) != s.end()) return true;
    return false;
  }

  void descend(Role role, std::uint64_t last) {
    const int ri = static_cast<int>(role);
    if (placed_.of(role).size() < want_[ri]) {
      for (auto x : pool(role)) {
        if (x <= last || used(x)) continue;
        std::size_t mark = trail_.size();
        if (place(role, x)) descend(role, x);
        unplace(role, mark);
      }
      return;
    }
    for (int next = ri + 1; next < 3; ++next) {
      if (want_[next] == 0) continue;
      Role nr = static_cast<Role>(next);
      for (auto x : pool(nr)) {
        if (used(x)) continue;
        std::size_t mark = trail_.size();
        if (place(nr, x)) descend(nr, x);
        unplace(nr, mark);
      }
      return;
    }
    leaf();
  }

  void leaf() {
    std::vector<std::uint64_t> w = placed_.of(Role::W);
    if (variant_.include_c0) w.push_back(0);
    SubscriptFamily family = make_family(variant_, n_, placed_.of(Role::U), placed_.of(Role::V), std::move(w));
    if (options_.require_degree_exact && !is_degree_exact(family)) return;
    if (options_.require_perfect && !residue_coverage(family).perfect()) return;
    if (!(canonical_family(family) == family)) return;
    out_->push_back(std::move(family));
  }

  Variant variant_;
  std::uint64_t n_;
  Split split_;
  const FamilySearchOptions& options_;
  const std::vector<ScheduleRow>& schedule_;
  std::int64_t slack_ = 0;
  std::size_t want_[3]{};
  std::vector<std::uint64_t> u_pool_, vw_pool_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint64_t> trail_;
  std::int64_t dups_ = 0;
  PlacedSets placed_;
  std::vector<SubscriptFamily>* out_ = nullptr;
};

// Splits in the preferred order: g_a descending from the real optimum
// (rounded up), then g_b likewise, wrapping round to the rest.
inline std::vector<Split> splits_for(unsigned m, const Variant& variant) {
  std::vector<Split> out;
  const bool has_a = variant.kind != VariantKind::UnrestrictedCyclic;
  for (std::size_t ga = 0; ga <= (has_a ? m : 0); ++ga)
    for (std::size_t gb = 0; ga + gb <= m; ++gb) out.push_back({ga, gb, m - ga - gb});
  auto cap = closed_form_cap(m, variant);
  auto key = [&](const Split& s) {
    Rational da = abs(Rational(s.ga) - cap.g_a);
    Rational db = abs(Rational(s.gb) - cap.g_b);
    return std::make_tuple(da, db, s.ga, s.gb);
  };
  std::stable_sort(out.begin(), out.end(), [&](const Split& a, const Split& b) { return key(a) < key(b); });
  return out;
}

} // namespace detail

/// All canonical witnesses at modulus n for m pairs (may be empty).
inline std::vector<SubscriptFamily> witnesses_at(std::uint64_t n, unsigned m, const Variant& variant,
                                                 const FamilySearchOptions& options = {}) {
  struct Item {
    detail::Split split;
    std::uint64_t first;
  };
  std::vector<Item> items;
  for (auto split : detail::splits_for(m, variant)) {
    detail::FamilyEnumerator probe(variant, n, split, options);
    if (!probe.feasible()) continue;
    if (split.ga + split.gb + split.gc == 0) {
      items.push_back({split, 0});
      continue;
    }
    for (auto x : probe.pool(probe.first_role())) items.push_back({split, x});
  }
  std::vector<std::vector<SubscriptFamily>> found(items.size());
  std::atomic<bool> late{false};
  parallel_for(items.size(), options.jobs, [&](std::size_t i) {
    if (options.deadline.expired()) {
      late = true;
      return;
    }
    detail::FamilyEnumerator e(variant, n, items[i].split, options);
    e.run_from(items[i].first, found[i]);
  });
  if (late) throw TimeBudgetExceeded(n, "family search ran out of time at n=" + std::to_string(n));
  std::vector<SubscriptFamily> all;
  for (auto& f : found) all.insert(all.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
  auto order = [](const SubscriptFamily& a, const SubscriptFamily& b) {
    return std::make_tuple(a.g_a(), a.g_b(), a.U, a.V, a.W) < std::make_tuple(b.g_a(), b.g_b(), b.U, b.V, b.W);
  };
  std::sort(all.begin(), all.end(), order);
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

/// Largest n (descending from the integer cap, keeping the variant's
/// parity) for which some family with l sets covers every residue of Z_n.
inline FamilySearchResult search_max_n(unsigned l, VariantKind kind, const FamilySearchOptions& options = {}) {
  if (l < 3) throw Error("l must be >= 3");
  auto layout = layout_for_l(kind, l);
  if (layout.m < 1) throw Error("l too small for this variant");
  FamilySearchResult result;
  result.l = l;
  result.variant = layout.variant;
  result.m = layout.m;
  std::uint64_t start = options.n_start.value_or(integer_cap(closed_form_cap(layout.m, layout.variant), kind));
  const std::uint64_t step = kind == VariantKind::UnrestrictedCyclic ? 1 : 2;
  if (kind == VariantKind::CyclicGalois && start % 2 == 0) --start;
  if (kind == VariantKind::AbelianGalois && start % 2 == 1) --start;
  for (std::uint64_t n = start; n >= 1 && n <= start; n -= step) {
    if (options.deadline.expired()) {
      throw TimeBudgetExceeded(n, "family search ran out of time at n=" + std::to_string(n));
    }
    if (options.on_order) options.on_order(n);
    auto found = witnesses_at(n, layout.m, layout.variant, options);
    if (!found.empty()) {
      result.n = n;
      result.witnesses = std::move(found);
      return result;
    }
  }
  return result;
}

/// Odd primes for which the family's group is admissible: p, p-1 and n
/// pairwise coprime for the circulant variant, any odd prime otherwise.
inline std::vector<std::uint64_t> admissible_primes(const SubscriptFamily& family, std::size_t count,
                                                    std::uint64_t from = 3) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = std::max<std::uint64_t>(from, 3); out.size() < count; ++p) {
    if (!is_prime(p)) continue;
    if (family.variant.kind == VariantKind::CyclicGalois && !is_cyclic_product(p, family.n)) continue;
    out.push_back(p);
  }
  return out;
}

struct VerificationResult {
  std::uint64_t order = 0;
  std::uint64_t degree = 0;
  std::uint64_t base_degree = 0;            // blocks + standard extras
  std::vector<GroupElement> standard;       // standard extras used
  std::vector<GroupElement> completion;     // extras found by complete()
  unsigned l = 0;
  Rational quadratic_coefficient;           // n / l^2
  bool is_diameter_2 = false;
};

/// Assembles the family's blocks with the standard extras, completes the
/// set within `budget` extra pairs, and confirms diameter 2 directly.
inline VerificationResult verify_family_instance(const SubscriptFamily& family, const Ambient& ambient,
                                                 unsigned budget = 4) {
  VerificationResult result;
  result.standard = standard_extras(family);
  ConnectionSet base = assemble(family, ambient, result.standard);
  const GroupSpec& spec = base.spec();
  result.base_degree = base.degree();
  result.completion = complete(spec, base, budget);
  ConnectionSet full = result.completion.empty() ? base : base.with(result.completion);
  auto report = check_two_coverage(spec, full);
  result.order = spec.order();
  result.degree = full.degree();
  result.l = family.l();
  result.quadratic_coefficient = Rational(family.n) / (Rational(result.l) * result.l);
  result.is_diameter_2 = report.is_diameter_2;
  return result;
}

} // namespace ddx2
