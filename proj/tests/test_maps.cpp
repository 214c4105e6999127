#include <gtest/gtest.h>

#include "orderdual/lattice.hpp"
#include "orderdual/maps.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace orderdual;

namespace {

PosetPtr chain(std::size_t n) { return share(Poset::chain(n)); }

// Monotone iff every decreasing set pulls back to a decreasing set; decreasing
// sets enumerated over all subsets.
bool monotone_by_preimages(const PosetMap& m) {
  const auto& cod = *m.codomain();
  const std::size_t n = cod.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto a = ElementSet::from_mask(n, mask);
    if (!oracle::decreasing(cod, a)) continue;
    if (!oracle::decreasing(*m.domain(), inverse_image(m, a))) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> all_tables(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= n;
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<std::size_t> t(n);
    std::size_t rest = c;
    for (auto& v : t) {
      v = rest % n;
      rest /= n;
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST(PosetMap, IdentityComposeAndImages) {
  const auto c = chain(4);
  const PosetMap down(c, {0, 0, 1, 2}, "down");
  const auto id = PosetMap::identity(c);
  EXPECT_EQ(compose(down, id), down);
  EXPECT_EQ(compose(down, down).img(), (std::vector<std::size_t>{0, 0, 0, 1}));
  EXPECT_EQ(down.image(ElementSet::from_indices(4, {2, 3})), ElementSet::from_indices(4, {1, 2}));
  EXPECT_EQ(inverse_image(down, ElementSet::from_indices(4, {0})), ElementSet::from_indices(4, {0, 1}));
}

TEST(PosetMap, RejectsOutOfRangeImages) {
  EXPECT_THROW(PosetMap(chain(3), {0, 1, 3}), std::invalid_argument);
  EXPECT_THROW(PosetMap(chain(3), {0, 1}), std::invalid_argument);
}

TEST(PosetMap, EqualityIgnoresNames) {
  const auto c = chain(2);
  EXPECT_EQ(PosetMap(c, {1, 1}, "a"), PosetMap(c, {1, 1}, "b"));
}

TEST(IsMonotone, ChainExamples) {
  const auto c = chain(3);
  EXPECT_TRUE(is_monotone(PosetMap(c, {0, 0, 2})).holds);
  const auto bad = is_monotone(PosetMap(c, {0, 2, 1}));
  EXPECT_FALSE(bad.holds);
  ASSERT_TRUE(bad.witness);
  EXPECT_EQ(*bad.witness, std::make_pair(std::size_t{1}, std::size_t{2}));
  EXPECT_TRUE(bad.cross_checked);
}

TEST(IsMonotone, ConstantMapsAreMonotone) {
  testgen::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = share(testgen::random_poset(rng, 6));
    const auto c = testgen::uniform_index(rng, 6);
    EXPECT_TRUE(is_monotone(PosetMap(p, std::vector<std::size_t>(6, c))).holds);
  }
}

TEST(IsMonotone, AgreesWithPreimageOracleOnRandomMaps) {
  testgen::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + testgen::uniform_index(rng, 6);
    const auto p = share(testgen::random_poset(rng, n));
    const PosetMap m(p, testgen::random_map_table(rng, n, n));
    EXPECT_EQ(is_monotone(m).holds, monotone_by_preimages(m)) << "trial " << trial;
  }
}

TEST(IsMonotone, RandomMonotoneGeneratorProducesMonotoneMaps) {
  testgen::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = share(testgen::random_poset(rng, 2 + testgen::uniform_index(rng, 6)));
    EXPECT_TRUE(monotone_by_preimages(testgen::random_monotone_map(rng, p)));
  }
}

TEST(IsAdditive, ChainCountMatchesCriterion) {
  // On a chain, additive <=> monotone and m(0) = 0; for {0,1,2} that is
  // m(1) <= m(2) with m(0) = 0: 6 maps.
  const auto c = chain(3);
  std::size_t additive = 0;
  for (const auto& t : all_tables(3)) {
    const PosetMap m(c, t);
    const bool crit = is_monotone(m).holds && t[0] == 0;
    EXPECT_EQ(is_additive(m).holds, crit);
    additive += crit;
  }
  EXPECT_EQ(additive, 6u);
}

TEST(IsAdditive, BooleanLatticeExamples) {
  const auto b = share(boolean_lattice(2));  // masks 0..3
  // x -> x n {0} is additive; x -> x u {0} moves the bottom.
  const PosetMap meet(b, {0, 1, 0, 1});
  const PosetMap join(b, {1, 1, 3, 3});
  EXPECT_TRUE(is_additive(meet).holds);
  const auto r = is_additive(join);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.detail, "m(0) != 0");
  // Monotone, fixes 0, but sends {0,1} to {0,1} while {0},{1} go to {}.
  const PosetMap top_only(b, {0, 0, 0, 3});
  EXPECT_TRUE(is_monotone(top_only).holds);
  EXPECT_FALSE(is_additive(top_only).holds);
}

TEST(IsAdditive, AgreesWithBruteForceEnumeration) {
  testgen::Rng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    const auto p = share(testgen::random_lattice(rng, 3 + testgen::uniform_index(rng, 3)));
    const auto lat = analyze_lattice(p);
    const auto expected = testgen::all_additive_maps(lat);
    std::size_t found = 0;
    for (const auto& t : all_tables(p->size())) found += is_additive(PosetMap(p, t), lat, lat).holds;
    EXPECT_EQ(found, expected.size()) << "trial " << trial;
  }
}

TEST(IsAdditive, AdditiveImpliesMonotone) {
  testgen::Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = share(testgen::random_lattice(rng, 5));
    for (const auto& m : testgen::all_additive_maps(analyze_lattice(p))) EXPECT_TRUE(is_monotone(m).holds);
  }
}

TEST(IsAdditive, NeedsBottomedJoinSemilattice) {
  const auto anti = share(Poset::antichain(2));
  EXPECT_THROW(is_additive(PosetMap::identity(anti)), std::invalid_argument);
}
