#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ddx2/connection.hpp"
#include "ddx2/coverage.hpp"
#include "ddx2/family_search.hpp"
#include "oracles.hpp"

using namespace ddx2;

TEST(TwoCoverage, CirculantExamples) {
  auto x13 = circulant_set(13, {1, 5});
  EXPECT_TRUE(check_two_coverage(x13.spec(), x13).is_diameter_2);

  auto x14 = circulant_set(14, {1, 5});
  auto rep = check_two_coverage(x14.spec(), x14);
  EXPECT_FALSE(rep.is_diameter_2);
  std::set<std::uint64_t> missing;
  for (const auto& e : rep.uncovered) missing.insert(e.coords[0]);
  EXPECT_EQ(missing, (std::set<std::uint64_t>{3, 7, 11}));
  EXPECT_EQ(rep.covered + rep.uncovered.size(), rep.order);
}

TEST(TwoCoverage, CompleteGraph) {
  auto g = GroupSpec::galois(5, 3);
  std::vector<GroupElement> all;
  for (const auto& e : enumerate(g))
    if (e != g.identity()) all.push_back(e);
  auto x = ConnectionSet::make(g, all);
  EXPECT_TRUE(check_two_coverage(g, x).is_diameter_2);
  EXPECT_EQ(diameter(g, x), 1u);
}

TEST(TwoCoverage, UncoveredListIsCapped) {
  auto x = circulant_set(1000, {1});
  CoverageOptions opts;
  opts.uncovered_limit = 10;
  auto rep = check_two_coverage(x.spec(), x, opts);
  EXPECT_EQ(rep.uncovered.size(), 10u);
  EXPECT_TRUE(rep.uncovered_truncated);
  EXPECT_EQ(rep.covered, 5u);
}

TEST(Diameter, Examples) {
  auto z5 = circulant_set(5, {1});
  EXPECT_EQ(diameter(z5.spec(), z5), 2u);
  auto z8 = circulant_set(8, {1}, true);
  EXPECT_EQ(diameter(z8.spec(), z8), 2u);
  auto z6 = circulant_set(6, {2});
  EXPECT_EQ(diameter(z6.spec(), z6), std::nullopt);
}

namespace {

// Random inverse-closed set in a random small group.
ConnectionSet random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  GroupSpec g = GroupSpec::cyclic(2);
  switch (kind(rng)) {
    case 0: {
      std::uniform_int_distribution<std::uint64_t> n(3, 400);
      g = GroupSpec::cyclic(n(rng));
      break;
    }
    case 1: {
      const std::uint64_t primes[] = {3, 5, 7, 11, 13};
      std::uniform_int_distribution<int> pi(0, 4);
      std::uniform_int_distribution<std::uint64_t> n(1, 30);
      g = GroupSpec::galois(primes[pi(rng)], n(rng));
      break;
    }
    default: {
      std::uniform_int_distribution<std::uint64_t> s(1, 12);
      g = GroupSpec::product(s(rng), s(rng), s(rng));
    }
  }
  if (g.order() < 2) g = GroupSpec::cyclic(7);
  std::uniform_int_distribution<std::uint64_t> pick(0, g.order() - 1);
  std::uniform_int_distribution<int> size(1, 2 + static_cast<int>(1.5 * std::sqrt(static_cast<double>(g.order()))));
  std::vector<GroupElement> xs;
  int want = size(rng);
  while (static_cast<int>(xs.size()) < want) {
    auto a = g.element_at(pick(rng));
    if (a == g.identity()) continue;
    xs.push_back(a);
    xs.push_back(g.inverse(a));
  }
  return ConnectionSet::make(g, xs);
}

} // namespace

TEST(CoverageProperties, AgreesWithDiameterAndNaiveSet) {
  std::mt19937_64 rng(7);
  int diameter_two = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_instance(rng);
    const auto& g = x.spec();
    ASSERT_LE(g.order(), 10000u);
    auto rep = check_two_coverage(g, x);
    auto d = diameter(g, x);
    ASSERT_EQ(rep.is_diameter_2, d.has_value() && *d <= 2) << "trial " << trial;
    ASSERT_EQ(rep.covered, oracle::two_ball(g, x.elements()).size()) << "trial " << trial;
    diameter_two += rep.is_diameter_2;
  }
  EXPECT_GT(diameter_two, 0);
}

TEST(CoverageProperties, ParallelBitsIdentical) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = random_instance(rng);
    EXPECT_EQ(two_coverage_bits(x, 1), two_coverage_bits(x, 8));
  }
}

TEST(CoverageProperties, Monotone) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = random_instance(rng);
    const auto& g = x.spec();
    std::uniform_int_distribution<std::uint64_t> pick(1, g.order() - 1);
    auto a = g.element_at(pick(rng));
    if (a == g.identity()) continue;
    auto bigger = x.with({a, g.inverse(a)});
    auto small = two_coverage_bits(x);
    auto large = two_coverage_bits(bigger);
    for (std::size_t w = 0; w < small.size(); ++w) ASSERT_EQ(small[w] & ~large[w], 0u);
  }
}

TEST(CoverageProperties, VertexTransitive) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_instance(rng);
    const auto& g = x.spec();
    auto from_e = eccentricity(x, g.identity());
    std::uniform_int_distribution<std::uint64_t> pick(0, g.order() - 1);
    for (int s = 0; s < 5; ++s) EXPECT_EQ(eccentricity(x, g.element_at(pick(rng))), from_e);
  }
}

TEST(Complete, AlreadyDiameterTwo) {
  auto x = circulant_set(13, {1, 5});
  EXPECT_TRUE(complete(x.spec(), x, 0).empty());
}

TEST(Complete, FailureWithinBudget) {
  auto x = circulant_set(14, {1});
  EXPECT_THROW(complete(x.spec(), x, 0), CompletionFailure);
}

TEST(Complete, FamilyBase) {
  auto f = family_from_table(VariantKind::CyclicGalois, 9, {1}, {3}, {0});
  auto base = assemble(f, GaloisParams{5}, standard_extras(f));
  auto extras = complete(base.spec(), base, 2);
  auto full = extras.empty() ? base : base.with(extras);
  EXPECT_TRUE(check_two_coverage(full.spec(), full).is_diameter_2);
  EXPECT_EQ(full.degree(), 22u);
}

TEST(Complete, MinimalAndLexLeastAgainstBruteForce) {
  // Oracle: try every set of at most two pair representatives in index
  // order and keep the first minimum-size success.
  for (std::uint64_t n : {16u, 19u, 24u, 27u, 30u}) {
    for (const std::vector<std::uint64_t>& gens : {std::vector<std::uint64_t>{1}, {1, 3}, {2, 5}}) {
      auto base = circulant_set(n, gens);
      const auto& g = base.spec();
      std::vector<std::uint64_t> reps;
      for (std::uint64_t i = 1; i < n; ++i)
        if (i <= n - i && !base.contains({{i}})) reps.push_back(i);
      auto works = [&](const std::vector<std::uint64_t>& add) {
        std::vector<std::uint64_t> all = gens;
        all.insert(all.end(), add.begin(), add.end());
        return oracle::circulant_diameter_2(n, oracle::circulant_x(n, all, false));
      };
      std::optional<std::vector<std::uint64_t>> expect;
      if (works({})) expect = std::vector<std::uint64_t>{};
      for (std::size_t i = 0; !expect && i < reps.size(); ++i)
        if (works({reps[i]})) expect = std::vector<std::uint64_t>{reps[i]};
      for (std::size_t i = 0; !expect && i < reps.size(); ++i)
        for (std::size_t j = i + 1; !expect && j < reps.size(); ++j)
          if (works({reps[i], reps[j]})) expect = std::vector<std::uint64_t>{reps[i], reps[j]};
      if (!expect) {
        EXPECT_THROW(complete(g, base, 2), CompletionFailure) << n;
        continue;
      }
      auto got = complete(g, base, 2);
      std::vector<std::uint64_t> got_reps;
      for (const auto& e : got)
        if (e.coords[0] <= n - e.coords[0]) got_reps.push_back(e.coords[0]);
      EXPECT_EQ(got_reps, *expect) << "n=" << n;
    }
  }
}
