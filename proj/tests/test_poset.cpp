#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "orderdual/poset.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace orderdual;

namespace {

Relation chain_relation(std::size_t n) {
  Relation r(n, std::vector<bool>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) r[x][y] = true;
  return r;
}

ElementSet all_of(std::size_t n) { return ElementSet::full(n); }

}  // namespace

TEST(ValidateOrder, ChainIsValid) { EXPECT_FALSE(validate_order(chain_relation(3)).has_value()); }

TEST(ValidateOrder, AntisymmetryWitness) {
  Relation r = {{true, true}, {true, true}};
  auto v = validate_order(r);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->axiom, OrderViolation::Axiom::antisymmetry);
  EXPECT_EQ(v->witness, (std::vector<std::size_t>{0, 1}));
}

TEST(ValidateOrder, TransitivityWitness) {
  Relation r = chain_relation(3);
  r[0][2] = false;
  auto v = validate_order(r);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->axiom, OrderViolation::Axiom::transitivity);
  EXPECT_EQ(v->witness, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ValidateOrder, ReflexivityAndShape) {
  Relation r = chain_relation(2);
  r[1][1] = false;
  EXPECT_EQ(validate_order(r)->axiom, OrderViolation::Axiom::reflexivity);
  Relation bad = {{true, false}};
  EXPECT_EQ(validate_order(bad)->axiom, OrderViolation::Axiom::shape);
  EXPECT_THROW(Poset::from_relation({{true, true}, {true, true}}), InvalidPoset);
}

TEST(Poset, CoversCycleRejected) { EXPECT_THROW(Poset::from_covers(2, {{0, 1}, {1, 0}}), InvalidPoset); }

TEST(Poset, CapIsEnforced) {
  EXPECT_THROW(Poset(5000), CapExceeded);
  EXPECT_THROW(grid_poset(8, 3), CapExceeded);
  EXPECT_NO_THROW(Poset(10, 10));
}

TEST(Poset, CoversRoundTrip) {
  testgen::Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto p = testgen::random_poset(rng, 1 + k % 7);
    EXPECT_EQ(Poset::from_covers(p.size(), p.covers()), p);
  }
}

TEST(UpSet, Examples) {
  const auto c3 = Poset::chain(3);
  EXPECT_TRUE(up_set(c3, ElementSet(3)).empty());
  EXPECT_EQ(up_set(c3, ElementSet(3, {1})), ElementSet(3, {1, 2}));
  // {0,1}^2, index = mask; (1,0) is index 1.
  const auto sq = grid_poset(2, 2);
  EXPECT_EQ(up_set(sq, ElementSet(4, {1})), ElementSet(4, {1, 3}));
  EXPECT_EQ(sq.label(1), "10");
}

TEST(MaximalElements, Examples) {
  EXPECT_TRUE(maximal_elements(Poset::chain(3), ElementSet(3)).empty());
  EXPECT_EQ(maximal_elements(Poset::chain(3), all_of(3)), ElementSet(3, {2}));
  EXPECT_EQ(maximal_elements(Poset::antichain(3), all_of(3)), all_of(3));
  EXPECT_EQ(minimal_elements(Poset::chain(3), all_of(3)), ElementSet(3, {0}));
}

TEST(ClassifySubset, Examples) {
  const auto c = classify_subset(Poset::chain(3), ElementSet(3, {0, 1}));
  EXPECT_TRUE(c.decreasing);
  EXPECT_TRUE(c.ideal);
  EXPECT_TRUE(c.principal_ideal);
  EXPECT_EQ(c.generator_down, 1u);
  EXPECT_FALSE(c.increasing);

  const auto sq = classify_subset(grid_poset(2, 2), ElementSet(4, {0, 1, 2}));
  EXPECT_TRUE(sq.decreasing);
  EXPECT_FALSE(sq.ideal);
  EXPECT_FALSE(sq.principal_ideal);

  const auto e = classify_subset(Poset::chain(4), ElementSet(4));
  EXPECT_TRUE(e.increasing);
  EXPECT_TRUE(e.decreasing);
  EXPECT_FALSE(e.filter);
  EXPECT_FALSE(e.ideal);
}

TEST(ClassifySubset, AgreesWithBruteForceOnRandomPosets) {
  testgen::Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto p = testgen::random_poset(rng, n);
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      const auto a = ElementSet::from_mask(n, mask);
      const auto c = classify_subset(p, a);
      ASSERT_EQ(c.increasing, oracle::increasing(p, a));
      ASSERT_EQ(c.decreasing, oracle::decreasing(p, a));
      ASSERT_EQ(c.filter, oracle::filter(p, a));
      ASSERT_EQ(c.ideal, oracle::ideal(p, a));
      ASSERT_EQ(c.principal_ideal, oracle::principal_ideal(p, a));
      ASSERT_EQ(c.principal_filter, oracle::principal_filter(p, a));
      // On finite posets ideals are exactly the principal ideals.
      ASSERT_EQ(c.ideal, c.principal_ideal);
      ASSERT_EQ(c.filter, c.principal_filter);
    }
  }
}

TEST(UpSet, ClosureProperties) {
  testgen::Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto p = share(testgen::random_poset(rng, n));
    const auto dv = dual_view(p);
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      const auto a = ElementSet::from_mask(n, mask);
      const auto up = up_set(*p, a);
      ASSERT_EQ(up_set(*p, up), up);
      ASSERT_TRUE(a.subset_of(up));
      ASSERT_EQ(down_set(*p, a), up_set(*dv.poset(), a));
      const auto maxdown = down_set(*p, maximal_elements(*p, a));
      ASSERT_TRUE(a.subset_of(maxdown));
      ASSERT_EQ(maxdown == a, is_decreasing(*p, a));
      if (!a.empty()) {
        ASSERT_FALSE(maximal_elements(*p, a).empty());
      }
    }
  }
}

TEST(DualView, ChainReverses) {
  const auto dv = dual_view(share(Poset::chain(3)));
  EXPECT_EQ(*dv.poset(), Poset::chain(3).reversed());
}

TEST(DualView, ComplementOnPowerSet) {
  // P({a,b}) with x' = complement: the view is again P({a,b}).
  const auto p = share(grid_poset(2, 2));
  const auto dv = dual_view(p, {3, 2, 1, 0});
  EXPECT_EQ(*dv.poset(), *p);
  EXPECT_EQ(dv.prime(ElementSet(4, {1})), ElementSet(4, {2}));
}

TEST(DualView, SingletonAndBadPrime) {
  const auto dv = dual_view(share(Poset()));
  EXPECT_EQ(*dv.poset(), Poset());
  EXPECT_THROW(dual_view(share(Poset::chain(3)), {0, 0, 1}), std::invalid_argument);
}

TEST(DualView, DoubleDualIsBase) {
  testgen::Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const auto p = share(testgen::random_poset(rng, n));
    std::vector<std::size_t> prime(n);
    std::iota(prime.begin(), prime.end(), std::size_t{0});
    std::shuffle(prime.begin(), prime.end(), rng);
    const auto dv = dual_view(p, prime);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) ASSERT_EQ(p->leq(x, y), dv.poset()->geq(dv.prime(x), dv.prime(y)));
    EXPECT_EQ(*dv.dual().poset(), *p);
    for (std::size_t x = 0; x < n; ++x) EXPECT_EQ(dv.unprime(dv.prime(x)), x);
  }
}

TEST(Product, Examples) {
  const auto sq = product_poset({Poset::chain(2), Poset::chain(2)});
  EXPECT_EQ(sq.size(), 4u);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_TRUE(sq.leq(0, x));
  EXPECT_FALSE(sq.comparable(1, 2));
  EXPECT_EQ(grid_poset(2, 3).size(), 9u);
  EXPECT_EQ(product_poset({}).size(), 1u);
}

TEST(MixedRadix, SiteZeroFastest) {
  const MixedRadix mr({3, 2});
  EXPECT_EQ(mr.decode(4), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(mr.encode({2, 1}), 5u);
  EXPECT_EQ(mr.digit(5, 0), 2u);
  EXPECT_EQ(mr.total(), 6u);
}

TEST(DecreasingSets, CountsAndOrder) {
  EXPECT_EQ(decreasing_sets(Poset::chain(4)).size(), 5u);
  EXPECT_EQ(decreasing_sets(Poset::antichain(3)).size(), 8u);
  const auto sets = decreasing_sets(Poset::antichain(3));
  for (std::uint64_t k = 0; k < 8; ++k) EXPECT_EQ(sets[k].to_mask(), k);
  EXPECT_THROW(decreasing_sets(Poset::antichain(10), 100), CapExceeded);
}
