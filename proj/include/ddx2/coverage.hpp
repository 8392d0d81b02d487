#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "ddx2/algebra.hpp"
#include "ddx2/connection.hpp"
#include "ddx2/error.hpp"
#include "ddx2/parallel.hpp"

namespace ddx2 {

struct CoverageReport {
  std::uint64_t order = 0;
  std::uint64_t covered = 0;
  std::vector<GroupElement> uncovered;  // at most the configured limit
  bool uncovered_truncated = false;
  bool is_diameter_2 = false;
};

struct CoverageOptions {
  std::size_t uncovered_limit = 64;
  unsigned jobs = 1;
};

namespace detail {

inline std::vector<std::uint64_t> flat_coords(const ConnectionSet& x) {
  std::vector<std::uint64_t> flat;
  flat.reserve(x.degree() * x.spec().rank());
  for (const auto& e : x.elements()) flat.insert(flat.end(), e.coords.begin(), e.coords.end());
  return flat;
}

inline void set_bit(std::vector<std::uint64_t>& bits, std::uint64_t i) {
  bits[i >> 6] |= std::uint64_t{1} << (i & 63);
}

inline bool test_bit(const std::vector<std::uint64_t>& bits, std::uint64_t i) {
  return (bits[i >> 6] >> (i & 63)) & 1;
}

} // namespace detail

/// Bitset over dense indices marking {e} u X u X.X. Rows of the pair
/// triangle are split across workers, each with a private bitset; the
/// results are OR-ed, so the output does not depend on `jobs`.
inline std::vector<std::uint64_t> two_coverage_bits(const ConnectionSet& x, unsigned jobs = 1) {
  const GroupSpec& spec = x.spec();
  spec.require_indexable();
  const std::size_t words = static_cast<std::size_t>((spec.order() + 63) / 64);
  const std::size_t rank = spec.rank();
  const std::size_t deg = x.degree();
  const auto flat = detail::flat_coords(x);

  auto mark_rows = [&](std::size_t begin, std::size_t end, std::vector<std::uint64_t>& bits) {
    for (std::size_t i = begin; i < end; ++i) {
      std::span<const std::uint64_t> a(flat.data() + i * rank, rank);
      for (std::size_t j = i; j < deg; ++j) {
        std::span<const std::uint64_t> b(flat.data() + j * rank, rank);
        detail::set_bit(bits, spec.product_index(a, b));
      }
    }
  };

  std::vector<std::uint64_t> bits(words, 0);
  detail::set_bit(bits, spec.index_of(spec.identity()));
  for (auto i : x.indices()) detail::set_bit(bits, i);

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(deg, 1))));
  if (jobs == 1) {
    mark_rows(0, deg, bits);
    return bits;
  }
  // Row i costs deg - i products; slice so each worker gets a similar share.
  std::vector<std::size_t> cuts{0};
  const double total = static_cast<double>(deg) * (deg + 1) / 2.0;
  double acc = 0;
  for (std::size_t i = 0; i < deg && cuts.size() < jobs; ++i) {
    acc += static_cast<double>(deg - i);
    if (acc >= total * static_cast<double>(cuts.size()) / jobs) cuts.push_back(i + 1);
  }
  cuts.push_back(deg);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::vector<std::uint64_t>> partial(cuts.size() - 1, std::vector<std::uint64_t>(words, 0));
  parallel_for(partial.size(), jobs, [&](std::size_t k) { mark_rows(cuts[k], cuts[k + 1], partial[k]); });
  for (const auto& part : partial) {
    for (std::size_t w = 0; w < words; ++w) bits[w] |= part[w];
  }
  return bits;
}

/// Exact diameter-2 test: every element is e, in X, or a product of two
/// elements of X.
inline CoverageReport check_two_coverage(const GroupSpec& spec, const ConnectionSet& x,
                                         const CoverageOptions& options = {}) {
  if (!(spec == x.spec())) throw ShapeMismatch("connection set belongs to a different group");
  const auto bits = two_coverage_bits(x, options.jobs);
  CoverageReport report;
  report.order = spec.order();
  for (std::uint64_t i = 0; i < spec.order(); ++i) {
    if (detail::test_bit(bits, i)) {
      ++report.covered;
    } else if (report.uncovered.size() < options.uncovered_limit) {
      report.uncovered.push_back(spec.element_at(i));
    } else {
      report.uncovered_truncated = true;
    }
  }
  report.is_diameter_2 = report.covered == report.order;
  return report;
}

/// Largest BFS distance from `source` in the Cayley graph, or nullopt when
/// some vertex is unreachable.
inline std::optional<unsigned> eccentricity(const ConnectionSet& x, const GroupElement& source) {
  const GroupSpec& spec = x.spec();
  spec.require_indexable();
  const std::size_t rank = spec.rank();
  const auto flat = detail::flat_coords(x);
  std::vector<std::int32_t> dist(spec.order(), -1);
  std::vector<std::uint64_t> frontier{spec.index_of(source)};
  dist[frontier.front()] = 0;
  std::vector<std::uint64_t> next;
  std::vector<std::uint64_t> coords(rank);
  std::uint64_t seen = 1;
  unsigned depth = 0;
  while (!frontier.empty()) {
    next.clear();
    for (auto v : frontier) {
      spec.coords_at(v, coords);
      for (std::size_t j = 0; j < x.degree(); ++j) {
        auto w = spec.product_index(coords, std::span<const std::uint64_t>(flat.data() + j * rank, rank));
        if (dist[w] < 0) {
          dist[w] = static_cast<std::int32_t>(depth + 1);
          next.push_back(w);
          ++seen;
        }
      }
    }
    if (next.empty()) break;
    ++depth;
    frontier.swap(next);
  }
  if (seen != spec.order()) return std::nullopt;
  return depth;
}

/// Diameter of the Cayley graph (nullopt = infinite, X does not generate).
/// Cayley graphs are vertex-transitive, so the identity suffices as source.
inline std::optional<unsigned> diameter(const GroupSpec& spec, const ConnectionSet& x) {
  if (!(spec == x.spec())) throw ShapeMismatch("connection set belongs to a different group");
  return eccentricity(x, spec.identity());
}

namespace detail {

// Exhaustive completion search. State is a per-element cover count over the
// current set S = X plus chosen extras, so additions can be undone exactly.
class Completer {
public:
  Completer(const ConnectionSet& base) : spec_(base.spec()), rank_(spec_.rank()) {
    const std::uint64_t order = spec_.order();
    if (order > (std::uint64_t{1} << 22)) throw TooLarge("completion search limited to groups of order <= 2^22");
    coords_.resize(order * rank_);
    for (std::uint64_t i = 0; i < order; ++i) {
      spec_.coords_at(i, std::span<std::uint64_t>(coords_.data() + i * rank_, rank_));
    }
    inverse_.resize(order);
    std::vector<std::uint64_t> buf(rank_);
    for (std::uint64_t i = 0; i < order; ++i) {
      for (std::size_t c = 0; c < rank_; ++c) buf[c] = spec_.inverse_coord(c, coords_[i * rank_ + c]);
      inverse_[i] = spec_.index_of_coords(buf);
    }
    roots_.resize(order);
    for (std::uint64_t i = 0; i < order; ++i) roots_[product(i, i)].push_back(i);
    in_set_.assign(order, 0);
    cover_.assign(order, 0);
    ++cover_[spec_.index_of(spec_.identity())];
    for (auto i : base.indices()) add(i);
  }

  std::optional<std::vector<std::uint64_t>> solve(unsigned budget) {
    for (unsigned k = 0; k <= budget; ++k) {
      solutions_.clear();
      std::vector<std::uint64_t> chosen;
      search(k, chosen, std::nullopt);
      if (!solutions_.empty()) return *solutions_.begin();
    }
    return std::nullopt;
  }

  std::uint64_t inverse(std::uint64_t i) const { return inverse_[i]; }

private:
  std::uint64_t product(std::uint64_t a, std::uint64_t b) const {
    return spec_.product_index(std::span<const std::uint64_t>(coords_.data() + a * rank_, rank_),
                               std::span<const std::uint64_t>(coords_.data() + b * rank_, rank_));
  }

  std::uint64_t rep(std::uint64_t i) const { return std::min(i, inverse_[i]); }

  void add(std::uint64_t a) {
    if (in_set_[a]) return;
    for (auto y : set_) ++cover_[product(a, y)];
    ++cover_[product(a, a)];
    ++cover_[a];
    in_set_[a] = 1;
    set_.push_back(a);
  }

  void remove_last() {
    std::uint64_t a = set_.back();
    set_.pop_back();
    in_set_[a] = 0;
    --cover_[a];
    --cover_[product(a, a)];
    for (auto y : set_) --cover_[product(a, y)];
  }

  // Adds the pair {c, c^-1}; returns how many elements were actually added.
  int add_pair(std::uint64_t c) {
    int added = 0;
    for (auto a : {c, inverse_[c]}) {
      if (!in_set_[a]) {
        add(a);
        ++added;
      }
    }
    return added;
  }

  void undo(int added) {
    while (added-- > 0) remove_last();
  }

  std::optional<std::uint64_t> first_uncovered() const {
    for (std::uint64_t i = 0; i < cover_.size(); ++i)
      if (cover_[i] == 0) return i;
    return std::nullopt;
  }

  // `pending` is set when the previous choice was the first half of a pair
  // of new extras that together must cover that element.
  void search(unsigned left, std::vector<std::uint64_t>& chosen, std::optional<std::uint64_t> pending) {
    auto u = first_uncovered();
    if (!u) {
      if (!pending) {
        std::vector<std::uint64_t> sorted = chosen;
        std::sort(sorted.begin(), sorted.end());
        solutions_.insert(sorted);
      }
      return;
    }
    if (left == 0) return;
    if (pending && *pending != *u) return;

    std::vector<std::uint64_t> singles{rep(*u)};
    for (auto y : set_) singles.push_back(rep(product(*u, inverse_[y])));
    for (auto r : roots_[*u]) singles.push_back(rep(r));
    std::sort(singles.begin(), singles.end());
    singles.erase(std::unique(singles.begin(), singles.end()), singles.end());

    for (auto c : singles) {
      if (in_set_[c]) continue;
      int added = add_pair(c);
      chosen.push_back(c);
      search(left - 1, chosen, std::nullopt);
      chosen.pop_back();
      undo(added);
    }
    if (pending || left < 2) return;
    for (std::uint64_t c = 0; c < cover_.size(); ++c) {
      if (rep(c) != c || in_set_[c] || std::binary_search(singles.begin(), singles.end(), c)) continue;
      int added = add_pair(c);
      chosen.push_back(c);
      search(left - 1, chosen, *u);
      chosen.pop_back();
      undo(added);
    }
  }

  const GroupSpec& spec_;
  std::size_t rank_;
  std::vector<std::uint64_t> coords_;
  std::vector<std::uint64_t> inverse_;
  std::vector<std::vector<std::uint64_t>> roots_;
  std::vector<char> in_set_;
  std::vector<std::uint32_t> cover_;
  std::vector<std::uint64_t> set_;
  std::set<std::vector<std::uint64_t>> solutions_;
};

} // namespace detail

/// Finds the fewest extra inverse pairs (at most `budget`, each pair {c, c^-1}
/// or a self-inverse singleton) that make `base` diameter 2. Among the
/// minimum-size solutions the one whose sorted pair representatives (the
/// smaller dense index of each pair) is lexicographically least is returned,
/// expanded to an inverse-closed element list.
inline std::vector<GroupElement> complete(const GroupSpec& spec, const ConnectionSet& base, unsigned budget) {
  if (!(spec == base.spec())) throw ShapeMismatch("connection set belongs to a different group");
  if (budget > 6) throw Error("completion budget is limited to 6");
  detail::Completer completer(base);
  auto solution = completer.solve(budget);
  if (!solution) throw CompletionFailure(budget);
  std::vector<std::uint64_t> indices;
  for (auto c : *solution) {
    indices.push_back(c);
    indices.push_back(completer.inverse(c));
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<GroupElement> out;
  for (auto i : indices) out.push_back(spec.element_at(i));
  return out;
}

} // namespace ddx2
