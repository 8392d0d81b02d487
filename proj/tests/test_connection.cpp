#include <gtest/gtest.h>

#include <set>

#include "ddx2/connection.hpp"
#include "ddx2/coverage.hpp"

using namespace ddx2;

namespace {

std::size_t self_inverse_count(const GroupSpec& g, const std::vector<GroupElement>& xs) {
  std::size_t k = 0;
  for (const auto& x : xs) k += g.inverse(x) == x;
  return k;
}

} // namespace

TEST(Blocks, SpecExamples) {
  auto g9 = GroupSpec::galois(5, 9);
  EXPECT_EQ(build_block(g9, BlockKind::A, 1).size(), 8u);
  EXPECT_EQ(build_block(g9, BlockKind::CPlus, 0).size(), 5u);
  EXPECT_THROW(build_block(g9, BlockKind::A, 0), BadSubscript);

  // B_{n/2}: p-1 elements, inverse-closed; only x = +-1 give self-inverse ones.
  auto g6 = GroupSpec::galois(5, 6);
  auto b3 = build_block(g6, BlockKind::B, 3);
  EXPECT_EQ(b3.size(), 4u);
  EXPECT_TRUE(is_inverse_closed(g6, b3));
  EXPECT_EQ(self_inverse_count(g6, b3), 2u);
}

TEST(Blocks, SizesMatchClosedForms) {
  for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 43u, 47u}) {
    for (std::uint64_t n = 2; n <= 50; n += 3) {
      auto g = GroupSpec::galois(p, n);
      for (std::uint64_t s = 1; s < n; ++s) {
        const bool half = 2 * s == n;
        if (!half) ASSERT_EQ(build_block(g, BlockKind::A, s).size(), 2 * (p - 1));
        ASSERT_EQ(build_block(g, BlockKind::B, s).size(), half ? p - 1 : 2 * (p - 1));
        ASSERT_EQ(build_block(g, BlockKind::CStar, s).size(), half ? p - 1 : 2 * (p - 1));
        ASSERT_EQ(build_block(g, BlockKind::CPlus, s).size(), half ? p : 2 * p);
        ASSERT_TRUE(is_inverse_closed(g, build_block(g, BlockKind::A, s)));
      }
      ASSERT_EQ(build_block(g, BlockKind::CPlus, 0).size(), p);
    }
  }
}

TEST(Blocks, Unrestricted) {
  auto k = GroupSpec::product(4, 5, 7);
  EXPECT_EQ(build_block(k, BlockKind::B, 2).size(), 8u);
  EXPECT_EQ(build_block(k, BlockKind::CPlus, 2).size(), 10u);
  EXPECT_EQ(build_block(k, BlockKind::CPlus, 0).size(), 5u);
  EXPECT_EQ(build_block(k, BlockKind::B, 0).size(), 4u);
  EXPECT_THROW(build_block(k, BlockKind::A, 1), VariantViolation);
}

TEST(Family, Validation) {
  EXPECT_NO_THROW(make_family(Variant::cyclic(true), 9, {1}, {3}, {0}));
  EXPECT_THROW(make_family(Variant::cyclic(true), 9, {0}, {3}, {0}), BadSubscript);
  EXPECT_THROW(make_family(Variant::cyclic(false), 9, {1}, {3}, {0}), BadSubscript);  // 0 in W needs C_0
  EXPECT_THROW(make_family(Variant::cyclic(true), 10, {1}, {3}, {0}), VariantViolation);  // even n
  EXPECT_THROW(make_family(Variant::abelian(true), 7, {1}, {}, {0}), VariantViolation);   // odd n
  EXPECT_THROW(make_family(Variant::unrestricted(false), 7, {1}, {2}, {3}), VariantViolation);
  EXPECT_THROW(make_family(Variant::cyclic(false), 13, {1, 1}, {3}, {4}), BadSubscript);
  EXPECT_THROW(make_family(Variant::abelian(false), 8, {1}, {4}, {3}), BadSubscript);  // n/2 belongs to B_{n/2}
}

TEST(Family, LayoutFollowsL) {
  auto f = family_from_table(VariantKind::CyclicGalois, 9, {1}, {3}, {0});
  EXPECT_EQ(f.m(), 2u);
  EXPECT_EQ(f.l(), 5u);
  auto a = family_from_table(VariantKind::AbelianGalois, 6, {1}, {3}, {0});
  EXPECT_EQ(a.m(), 1u);
  EXPECT_EQ(a.l(), 4u);
  EXPECT_TRUE(a.V.empty());  // n/2 is carried by B_{n/2}
  EXPECT_EQ(family_from_table(VariantKind::AbelianGalois, 8, {1}, {4}, {3}).l(), 5u);
}

TEST(StandardExtras, Examples) {
  auto f = family_from_table(VariantKind::CyclicGalois, 9, {1}, {3}, {0});
  auto x = standard_extras(f);
  std::set<GroupElement> got(x.begin(), x.end());
  EXPECT_EQ(got, (std::set<GroupElement>{{{1, 0, 1}}, {{1, 0, 8}}}));

  auto u = make_family(Variant::unrestricted(false), 7, {}, {1}, {2});
  EXPECT_TRUE(standard_extras(u).empty());

  auto f17 = family_from_table(VariantKind::CyclicGalois, 17, {1, 8}, {3}, {0});
  auto y = standard_extras(f17);
  std::set<std::uint64_t> z;
  for (const auto& e : y) {
    EXPECT_EQ(e.coords[0], 1u);
    EXPECT_EQ(e.coords[1], 0u);
    z.insert(e.coords[2]);
  }
  EXPECT_EQ(z, (std::set<std::uint64_t>{1, 16, 8, 9, 7, 10}));

  EXPECT_THROW(standard_extras(make_family(Variant::cyclic(false), 17, {1, 8}, {3}, {})), MissingW);
}

TEST(Assemble, DegreeExamples) {
  auto f5 = family_from_table(VariantKind::CyclicGalois, 9, {1}, {3}, {0});
  auto x5 = assemble(f5, GaloisParams{5}, standard_extras(f5));
  EXPECT_EQ(x5.degree(), 5u * 5 - 3);

  auto f4 = family_from_table(VariantKind::AbelianGalois, 6, {1}, {3}, {0});
  auto x4 = assemble(f4, GaloisParams{5}, standard_extras(f4));
  EXPECT_EQ(x4.degree(), 4u * 5 - 2);

  EXPECT_THROW(assemble(f5, GaloisParams{7}, {}), VariantViolation);  // gcd(6, 9) = 3
}

TEST(Assemble, EmptyFamily) {
  auto empty = make_family(Variant::unrestricted(false), 5, {}, {}, {});
  EXPECT_THROW(assemble(empty, ProductParams{3, 3}, {}), EmptyConnectionSet);
}

TEST(Assemble, DegreeFormulaWithoutCollisions) {
  // Cyclic, no C_0: 2 g_a (p-1) + 2 g_b (p-1) + 2 g_c p + standard extras.
  auto f = family_from_table(VariantKind::CyclicGalois, 13, {1}, {3}, {4});
  for (std::uint64_t p : {3u, 5u, 7u, 11u}) {
    if (!is_cyclic_product(p, 13)) continue;
    auto x = assemble(f, GaloisParams{p}, standard_extras(f));
    EXPECT_EQ(x.degree(), 2 * (p - 1) + 2 * (p - 1) + 2 * p + 2) << p;
    EXPECT_EQ(block_degree(f, GaloisParams{p}), 2 * (p - 1) + 2 * (p - 1) + 2 * p);
  }
}

TEST(ConnectionSet, Validation) {
  auto z = GroupSpec::cyclic(7);
  EXPECT_THROW(ConnectionSet::make(z, {{{1}}}), InvalidConnectionSet);
  EXPECT_THROW(ConnectionSet::make(z, {{{0}}, {{1}}, {{6}}}), InvalidConnectionSet);
  EXPECT_THROW(ConnectionSet::make(z, {}), EmptyConnectionSet);
  auto x = ConnectionSet::make(z, {{{6}}, {{1}}, {{1}}});
  EXPECT_EQ(x.degree(), 2u);
  EXPECT_TRUE(x.contains({{6}}));
}

TEST(Assemble, AlwaysInverseClosed) {
  struct Case {
    VariantKind k;
    std::uint64_t n;
    std::vector<std::uint64_t> U, V, W;
  };
  std::vector<Case> cases = {
      {VariantKind::CyclicGalois, 9, {1}, {3}, {0}},        {VariantKind::CyclicGalois, 13, {1}, {3}, {4}},
      {VariantKind::CyclicGalois, 17, {1, 8}, {3}, {0}},    {VariantKind::CyclicGalois, 21, {2, 9}, {3}, {1}},
      {VariantKind::CyclicGalois, 27, {5, 11}, {12, 13}, {0}}, {VariantKind::AbelianGalois, 6, {1}, {3}, {0}},
      {VariantKind::AbelianGalois, 8, {1}, {4}, {3}},       {VariantKind::AbelianGalois, 12, {1}, {6}, {0, 3}},
      {VariantKind::AbelianGalois, 16, {1, 6}, {8}, {2}},
  };
  for (const auto& c : cases) {
    auto f = family_from_table(c.k, c.n, c.U, c.V, c.W);
    for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u}) {
      if (c.k == VariantKind::CyclicGalois && !is_cyclic_product(p, c.n)) continue;
      auto x = assemble(f, GaloisParams{p}, standard_extras(f));
      EXPECT_TRUE(is_inverse_closed(x.spec(), x.elements()));
      EXPECT_FALSE(x.contains(x.spec().identity()));
    }
  }
  auto u = make_family(Variant::unrestricted(true), 7, {}, {1, 2}, {0, 3});
  auto x = assemble(u, ProductParams{4, 5}, {});
  EXPECT_TRUE(is_inverse_closed(x.spec(), x.elements()));
  EXPECT_FALSE(x.contains(x.spec().identity()));
}
