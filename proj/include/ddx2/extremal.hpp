#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ddx2/bounds.hpp"
#include "ddx2/connection.hpp"
#include "ddx2/coverage.hpp"
#include "ddx2/error.hpp"
#include "ddx2/parallel.hpp"
#include "ddx2/rational.hpp"

namespace ddx2 {

/// A circulant of degree d on Z_n. Generators keep the order they were
/// given in; for odd d the connection set also holds n/2.
struct ExtremalRecord {
  std::uint64_t d = 0;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> generators;
  bool self_inverse_included = false;

  friend bool operator==(const ExtremalRecord&, const ExtremalRecord&) = default;
};

struct RecordCheck {
  std::uint64_t computed_degree = 0;
  bool degree_matches = false;
  std::optional<unsigned> diameter;  // nullopt when disconnected
  bool generators_sorted = true;

  bool diameter_2() const { return diameter == 2u; }
  bool ok() const { return degree_matches && diameter_2(); }
  /// Something about the record differs from what it claims or from the
  /// catalog convention, even if the graph itself is fine.
  bool flagged() const { return !degree_matches || !generators_sorted; }
};

inline ConnectionSet record_connection_set(const ExtremalRecord& rec) {
  if (rec.n < 3) throw MalformedRecord("n must be >= 3, got " + std::to_string(rec.n));
  if (rec.generators.empty()) throw MalformedRecord("empty generator list");
  std::vector<std::uint64_t> seen = rec.generators;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw MalformedRecord("repeated generator in record of degree " + std::to_string(rec.d));
  }
  for (auto g : rec.generators) {
    if (g == 0 || 2 * g > rec.n) {
      throw MalformedRecord("generator " + std::to_string(g) + " outside [1, n/2] for n = " + std::to_string(rec.n));
    }
  }
  if (rec.self_inverse_included && rec.n % 2 != 0) throw MalformedRecord("n/2 flagged but n is odd");
  return circulant_set(rec.n, rec.generators, rec.self_inverse_included);
}

/// Builds X from the generators, their negatives and (if flagged) n/2, then
/// reports the degree actually obtained and the diameter.
inline RecordCheck check_record(const ExtremalRecord& rec) {
  auto x = record_connection_set(rec);
  RecordCheck out;
  out.computed_degree = x.degree();
  out.degree_matches = out.computed_degree == rec.d;
  out.generators_sorted = std::is_sorted(rec.generators.begin(), rec.generators.end());
  out.diameter = diameter(x.spec(), x);
  return out;
}

inline bool verify_record(const ExtremalRecord& rec) { return check_record(rec).ok(); }

namespace detail {

inline std::uint64_t fold(std::uint64_t r, std::uint64_t n) { return std::min(r, n - r); }

} // namespace detail

/// Least image of the generator set under the unit multipliers of Z_n,
/// each image folded into [1, n/2] and sorted.
inline std::vector<std::uint64_t> canonical_multiplier_form(std::uint64_t n, const std::vector<std::uint64_t>& gens) {
  std::vector<std::uint64_t> best;
  std::vector<std::uint64_t> image(gens.size());
  for (std::uint64_t u = 1; u < n; ++u) {
    if (std::gcd(u, n) != 1) continue;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      image[i] = detail::fold(static_cast<std::uint64_t>((static_cast<unsigned __int128>(u) * gens[i]) % n), n);
    }
    std::sort(image.begin(), image.end());
    if (best.empty() || image < best) best = image;
  }
  return best;
}

namespace detail {

// Depth-first search over generator sets s_1 < ... < s_g in [1, (n-1)/2]
// with incremental counts of X u (X + X). Only multiplier-canonical
// prefixes are visited: s_1 divides n and no later s has a smaller gcd
// with n.
class CirculantSearcher {
public:
  CirculantSearcher(std::uint64_t n, unsigned pairs, bool self_inverse, const Deadline& deadline)
      : n_(static_cast<std::uint32_t>(n)), pairs_(pairs), self_inverse_(self_inverse), deadline_(deadline),
        count_(n, 0) {
    count_[0] = 1;  // identity
    covered_ = 1;
    if (self_inverse_) add_element(n_ / 2);
  }

  /// First generator set (lexicographic) starting with `prefix`.
  std::optional<std::vector<std::uint64_t>> run(const std::vector<std::uint32_t>& prefix) {
    const std::uint32_t limit = (n_ - 1) / 2;
    for (auto s : prefix) {
      if (s == 0 || s > limit) return std::nullopt;
    }
    for (std::size_t i = 1; i < prefix.size(); ++i) {
      if (prefix[i] <= prefix[i - 1] || std::gcd(prefix[i], n_) < prefix[0]) return std::nullopt;
    }
    if (prefix.empty() || n_ % prefix[0] != 0) return std::nullopt;
    for (auto s : prefix) push(s);
    std::optional<std::vector<std::uint64_t>> found;
    if (dfs(prefix.size())) found = solution_;
    while (!chosen_.empty()) pop();
    return found;
  }

  bool aborted() const { return aborted_; }

private:
  bool dfs(std::size_t depth) {
    if (depth == pairs_) {
      if (covered_ != n_) return false;
      solution_.assign(chosen_.begin(), chosen_.end());
      return true;
    }
    if ((++nodes_ & 0xFFF) == 0 && deadline_.expired()) {
      aborted_ = true;
      return false;
    }
    // Each remaining pair adds at most 2k+5 new residues, k being |X| when
    // it is added.
    std::uint64_t reach = covered_;
    std::uint64_t k = x_.size();
    for (std::size_t r = depth; r < pairs_; ++r, k += 2) reach += 2 * k + 5;
    if (reach < n_) return false;
    const std::uint32_t limit = (n_ - 1) / 2;
    const std::uint32_t s1 = chosen_.front();
    for (std::uint32_t s = chosen_.back() + 1; s + (pairs_ - depth) <= limit + 1; ++s) {
      if (std::gcd(s, n_) < s1) continue;
      push(s);
      bool ok = dfs(depth + 1);
      pop();
      if (ok || aborted_) return ok;
    }
    return false;
  }

  void push(std::uint32_t s) {
    chosen_.push_back(s);
    add_element(s);
    add_element(n_ - s);
  }

  void pop() {
    chosen_.pop_back();
    remove_last();
    remove_last();
  }

  void bump(std::uint32_t r) {
    if (count_[r]++ == 0) ++covered_;
  }

  void drop(std::uint32_t r) {
    if (--count_[r] == 0) --covered_;
  }

  void add_element(std::uint32_t x) {
    x_.push_back(x);
    for (auto y : x_) bump(add(x, y));
    bump(x);
  }

  void remove_last() {
    std::uint32_t x = x_.back();
    drop(x);
    for (auto y : x_) drop(add(x, y));
    x_.pop_back();
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= n_ ? s - n_ : s;
  }

  std::uint32_t n_;
  unsigned pairs_;
  bool self_inverse_;
  const Deadline& deadline_;
  std::vector<std::uint32_t> count_;
  std::uint64_t covered_ = 0;
  std::vector<std::uint32_t> x_;
  std::vector<std::uint32_t> chosen_;
  std::vector<std::uint64_t> solution_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

} // namespace detail

struct ExtremalSearchOptions {
  std::optional<std::uint64_t> n_max;  // defaults to mac_upper(d, 2)
  unsigned jobs = 1;
  Deadline deadline;
  std::function<void(std::uint64_t n)> on_order;  // called before each n
};

/// Lexicographically least diameter-2 generator set of size floor(d/2) on
/// Z_n (plus n/2 for odd d), if any.
inline std::optional<ExtremalRecord> circulant_witness(std::uint64_t d, std::uint64_t n, unsigned jobs,
                                                       const Deadline& deadline = {}) {
  if (d < 2) throw Error("degree must be >= 2");
  const bool odd = d % 2 == 1;
  const unsigned pairs = static_cast<unsigned>(d / 2);
  if (odd && n % 2 != 0) return std::nullopt;
  if (n > std::numeric_limits<std::uint32_t>::max() / 2) throw TooLarge("order too large for circulant search");
  const std::uint64_t limit = (n - 1) / 2;
  if (pairs == 0 || limit < pairs) return std::nullopt;

  // Work items: prefixes of length up to two, in lexicographic order.
  std::vector<std::vector<std::uint32_t>> items;
  for (std::uint32_t a = 1; a <= limit; ++a) {
    if (n % a != 0) continue;
    if (pairs == 1) {
      items.push_back({a});
      continue;
    }
    for (std::uint32_t b = a + 1; b <= limit; ++b) {
      if (std::gcd<std::uint64_t, std::uint64_t>(b, n) >= a) items.push_back({a, b});
    }
  }

  std::vector<std::optional<std::vector<std::uint64_t>>> results(items.size());
  std::atomic<std::size_t> best{items.size()};
  std::atomic<bool> aborted{false};
  parallel_for(items.size(), jobs, [&](std::size_t i) {
    if (i > best.load() || aborted.load()) return;
    if (deadline.expired()) {
      aborted = true;
      return;
    }
    detail::CirculantSearcher searcher(n, pairs, odd, deadline);
    results[i] = searcher.run(items[i]);
    if (searcher.aborted()) aborted = true;
    if (results[i]) {
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  });
  // A success at an index below every unfinished item is final even if the
  // deadline hit.
  std::size_t b = best.load();
  if (aborted) {
    throw TimeBudgetExceeded(n, "time budget exhausted while searching n = " + std::to_string(n));
  }
  if (b == items.size()) return std::nullopt;
  return ExtremalRecord{d, n, *results[b], odd};
}

/// Largest n <= n_max with a diameter-2 circulant of degree d, searched
/// downwards.
inline ExtremalRecord search_extremal(std::uint64_t d, const ExtremalSearchOptions& opts = {}) {
  if (d < 2) throw Error("degree must be >= 2");
  std::uint64_t n_max = opts.n_max ? *opts.n_max : static_cast<std::uint64_t>(mac_upper(d, 2));
  for (std::uint64_t n = n_max; n >= 3; --n) {
    if (opts.deadline.expired()) {
      throw TimeBudgetExceeded(n, "time budget exhausted before n = " + std::to_string(n));
    }
    if (opts.on_order) opts.on_order(n);
    if (auto rec = circulant_witness(d, n, opts.jobs, opts.deadline)) return *rec;
  }
  throw Error("no diameter-2 circulant of degree " + std::to_string(d) + " below the bound");
}

struct QuadraticFit {
  Rational a, b, c;
  Rational residual;  // sum of squared errors
};

inline Rational fit_residual(const std::vector<ExtremalRecord>& records, const Rational& a, const Rational& b,
                             const Rational& c) {
  Rational sum = 0;
  for (const auto& r : records) {
    Rational d(r.d);
    Rational e = a * d * d + b * d + c - Rational(r.n);
    sum += e * e;
  }
  return sum;
}

/// Least squares n ~ a d^2 + b d + c through the normal equations, exactly.
inline QuadraticFit quadratic_fit(const std::vector<ExtremalRecord>& records) {
  std::vector<std::uint64_t> degrees;
  for (const auto& r : records) degrees.push_back(r.d);
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  if (degrees.size() < 3) {
    throw DegenerateSystem("need at least 3 distinct degrees, got " + std::to_string(degrees.size()));
  }
  std::array<BigInt, 5> sd{};  // sum d^k
  std::array<BigInt, 3> sy{};  // sum n d^k
  for (const auto& r : records) {
    BigInt p = 1;
    for (int k = 0; k < 5; ++k) {
      sd[k] += p;
      if (k < 3) sy[k] += p * r.n;
      p *= r.d;
    }
  }
  // Unknowns ordered (a, b, c); row i pairs with basis d^(2-i).
  std::array<std::array<Rational, 4>, 3> m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = Rational(sd[4 - i - j]);
    m[i][3] = Rational(sy[2 - i]);
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    while (pivot < 3 && m[pivot][col] == 0) ++pivot;
    if (pivot == 3) throw DegenerateSystem("singular normal equations");
    std::swap(m[col], m[pivot]);
    for (int row = 0; row < 3; ++row) {
      if (row == col || m[row][col] == 0) continue;
      Rational f = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
    }
  }
  QuadraticFit fit;
  fit.a = m[0][3] / m[0][0];
  fit.b = m[1][3] / m[1][1];
  fit.c = m[2][3] / m[2][2];
  fit.residual = fit_residual(records, fit.a, fit.b, fit.c);
  return fit;
}

} // namespace ddx2
