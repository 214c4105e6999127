#include <gtest/gtest.h>

#include "orderdual/duality.hpp"
#include "orderdual/lattice.hpp"
#include "orderdual/models.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace orderdual;

namespace {

PosetPtr chain(std::size_t n) { return share(Poset::chain(n)); }

std::size_t state(const SiteSpace& sp, const std::string& word) {
  for (std::size_t x = 0; x < sp.size(); ++x)
    if (sp.poset->label(x) == word) return x;
  throw std::logic_error("no state " + word);
}

ElementSet words(const SiteSpace& sp, std::initializer_list<const char*> ws) {
  ElementSet b(sp.size());
  for (auto w : ws) b.insert(state(sp, w));
  return b;
}

// phi(m(x), B) = phi(x, mhat(B)) by direct evaluation of the definition.
bool phi_dual(const DualityPairing& d, const PosetMap& m, const std::vector<ElementSet>& sets,
              const std::function<ElementSet(const ElementSet&)>& mhat, bool tilde) {
  for (std::size_t x = 0; x < d.size(); ++x)
    for (const auto& b : sets) {
      const auto lhs = tilde ? d.phi_tilde_value(m(x), b) : d.phi_value(m(x), b);
      const auto rhs = tilde ? d.phi_tilde_value(x, mhat(b)) : d.phi_value(x, mhat(b));
      if (lhs != rhs) return false;
    }
  return true;
}

std::vector<ElementSet> all_subsets(std::size_t n) {
  std::vector<ElementSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) out.push_back(ElementSet::from_mask(n, mask));
  return out;
}

}  // namespace

TEST(DualityPairing, ChainWithIdentityPrime) {
  const DualityPairing d(chain(4));
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y) EXPECT_EQ(d.pairing_value(x, y), x <= y ? 1 : 0);
  EXPECT_EQ(d.phi_value(2, ElementSet::from_indices(4, {1, 3})), 1);
  EXPECT_EQ(d.phi_value(2, ElementSet::from_indices(4, {0, 1})), 0);
  EXPECT_EQ(d.phi_tilde_value(2, ElementSet::from_indices(4, {3})), 0);
  EXPECT_EQ(d.phi_value(0, ElementSet(4)), 0);
}

TEST(DualityPairing, ComplementOnSites) {
  const auto sp = site_space(2, 2);
  const auto d = complement_site_pairing(sp);
  // <x,y> = 1{x and y disjoint}.
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y) EXPECT_EQ(d.pairing_value(x, y), (x & y) == 0 ? 1 : 0);
}

TEST(AdditiveDual, SiegmundDownStep) {
  // m(x) = max(x-1, 0) on {0..4}: m^{-1}({y}v) = {0..min(y+1,4)}, so m'(y) = min(y+1, 4).
  const auto c = chain(5);
  const PosetMap m(c, {0, 0, 1, 2, 3}, "down");
  const DualityPairing d(c);
  const auto mp = additive_dual(d, m);
  EXPECT_EQ(mp.img(), (std::vector<std::size_t>{1, 2, 3, 4, 4}));
  EXPECT_EQ(mp(4), 4u);
  EXPECT_EQ(mp.name(), "down'");
  EXPECT_TRUE(verify_additive_pair(d, m, mp).ok);
}

TEST(AdditiveDual, RejectsNonAdditiveWithElement) {
  const auto c = chain(4);
  const PosetMap up(c, {1, 2, 3, 3}, "up");
  const DualityPairing d(c);
  try {
    additive_dual(d, up);
    FAIL() << "expected NotAdditive";
  } catch (const NotAdditive& e) {
    EXPECT_EQ(e.element(), 0u);  // m^{-1}({0}v) is empty
  }
}

TEST(AdditiveDual, IdentityIsSelfDual) {
  const auto c = chain(3);
  const DualityPairing d(c);
  EXPECT_EQ(additive_dual(d, PosetMap::identity(c)).img(), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(AdditiveDual, RandomLatticesDualityAndInvolution) {
  testgen::Rng rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const auto p = share(testgen::random_lattice(rng, 3 + testgen::uniform_index(rng, 3)));
    const DualityPairing d(p);
    for (const auto& m : testgen::all_additive_maps(analyze_lattice(p))) {
      const auto mp = additive_dual(d, m);
      ASSERT_TRUE(verify_additive_pair(d, m, mp).ok);
      // The dual of m' for the pairing seen from S' is m again.
      EXPECT_EQ(additive_dual(d.reversed(), mp).img(), m.img());
    }
  }
}

TEST(AdditiveDual, UniqueAmongAllMaps) {
  // No other table on S' satisfies the duality relation.
  const auto b = share(boolean_lattice(2));
  const DualityPairing d(b);
  const PosetMap m(b, {0, 1, 0, 1});
  const auto mp = additive_dual(d, m);
  std::size_t solutions = 0;
  for (std::size_t c = 0; c < 256; ++c) {
    std::vector<std::size_t> t{c % 4, c / 4 % 4, c / 16 % 4, c / 64 % 4};
    if (!verify_additive_pair(d, m, PosetMap(d.dual(), t)).ok) continue;
    ++solutions;
    EXPECT_EQ(t, mp.img());
  }
  EXPECT_EQ(solutions, 1u);
}

TEST(AdditiveDual, VoterDualIsCoalescingWalk) {
  const auto sp = site_space(3, 2);
  const auto d = complement_site_pairing(sp);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      EXPECT_EQ(additive_dual(d, voter_map(sp, i, j)).img(), rw_map(sp, j, i).img()) << i << j;
    }
}

TEST(AdditiveDual, VoterMapExamples) {
  const auto sp = site_space(2, 2);
  const auto v = voter_map(sp, 0, 1);
  EXPECT_EQ(sp.poset->label(v(state(sp, "10"))), "11");
  EXPECT_EQ(sp.poset->label(v(state(sp, "01"))), "00");
}

TEST(AdditiveDual, CoopAdditiveMapsPairUp) {
  const auto sp = site_space(3, 2);
  const auto d = complement_site_pairing(sp);
  EXPECT_EQ(additive_dual(d, coop_a(sp, 0, 1)).img(), coop_c(sp, 0, 1).img());
  EXPECT_EQ(additive_dual(d, coop_c(sp, 0, 1)).img(), coop_a(sp, 0, 1).img());
  EXPECT_EQ(additive_dual(d, coop_d(sp, 2)).img(), coop_d(sp, 2).img());
  EXPECT_EQ(additive_dual(d, coop_e(sp, 1, 2)).img(), coop_e(sp, 1, 2).img());
  EXPECT_EQ(coop_a(sp, 0, 1).img(), voter_map(sp, 1, 0).img());
  EXPECT_EQ(coop_c(sp, 0, 1).img(), rw_map(sp, 0, 1).img());
}

TEST(MonotoneDual, CoopBranchingStarOfSingleton) {
  const auto sp = site_space(3, 2);
  const auto d = complement_site_pairing(sp);
  const MonotoneDualMaps md(d, coop_b(sp, 0, 1, 2));
  EXPECT_EQ(md.star(words(sp, {"001"})), words(sp, {"011", "101"}));
  EXPECT_EQ(md.star(words(sp, {"010"})), words(sp, {"010"}));
  EXPECT_EQ(sp.poset->label(coop_b1(sp, 0, 1, 2)(state(sp, "001"))), "011");
  EXPECT_EQ(sp.poset->label(coop_b2(sp, 0, 1, 2)(state(sp, "001"))), "101");
}

TEST(MonotoneDual, CoopStarIsUnionOfB1B2OnEverySet) {
  const auto sp = site_space(3, 2);
  const auto d = complement_site_pairing(sp);
  const MonotoneDualMaps md(d, coop_b(sp, 2, 0, 1));
  const std::vector<PosetMap> parts{coop_b1(sp, 2, 0, 1), coop_b2(sp, 2, 0, 1)};
  for (const auto& b : all_subsets(8)) EXPECT_EQ(md.star(b), apply_union(parts, b)) << b.to_string();
}

TEST(MonotoneDual, CoopBranchingIsNotAdditive) {
  const auto sp = site_space(3, 2);
  EXPECT_TRUE(is_monotone(coop_b(sp, 0, 1, 2)).holds);
  EXPECT_FALSE(is_additive(coop_b(sp, 0, 1, 2)).holds);
  EXPECT_THROW(additive_dual(complement_site_pairing(sp), coop_b(sp, 0, 1, 2)), NotAdditive);
}

TEST(MonotoneDual, AllVariantsDualOnRandomPosets) {
  testgen::Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + testgen::uniform_index(rng, 5);
    const auto p = share(testgen::random_poset(rng, n));
    const DualityPairing d(p);
    const auto m = testgen::random_monotone_map(rng, p);
    const MonotoneDualMaps md(d, m);
    const auto sets = all_subsets(n);
    EXPECT_TRUE(phi_dual(d, m, sets, [&](const ElementSet& b) { return md.dagger(b); }, false)) << trial;
    EXPECT_TRUE(phi_dual(d, m, sets, [&](const ElementSet& b) { return md.star(b); }, false)) << trial;
    EXPECT_TRUE(phi_dual(d, m, sets, [&](const ElementSet& b) { return md.circ(b); }, true)) << trial;
    EXPECT_TRUE(phi_dual(d, m, sets, [&](const ElementSet& b) { return md.bullet(b); }, true)) << trial;
  }
}

TEST(MonotoneDual, DaggerAndStarAreAntichains) {
  testgen::Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + testgen::uniform_index(rng, 5);
    const auto p = share(testgen::random_poset(rng, n));
    const DualityPairing d(p);
    const MonotoneDualMaps md(d, testgen::random_monotone_map(rng, p));
    for (const auto& b : antichains(*d.dual())) {
      EXPECT_TRUE(is_antichain(*d.dual(), md.dagger(b)));
      EXPECT_TRUE(is_antichain(*d.dual(), md.circ(b)));
    }
  }
}

TEST(MonotoneDual, AdditiveMapsStarIsImage) {
  // For additive m, m*(B) = m'(B).
  const auto sp = site_space(2, 3);
  const auto d = krone_pairing(sp);
  const auto m = krone_map(sp, KroneKind::b, 0, 1);
  const auto mp = additive_dual(d, m);
  const MonotoneDualMaps md(d, m);
  for (std::size_t y = 0; y < d.size(); ++y) {
    const auto b = ElementSet::from_indices(d.size(), {y});
    EXPECT_EQ(md.star(b), mp.image(b));
  }
}

TEST(MonotoneDual, RejectsNonMonotone) {
  const auto c = chain(3);
  try {
    MonotoneDualMaps(DualityPairing(c), PosetMap(c, {2, 0, 1}));
    FAIL();
  } catch (const NotMonotone& e) {
    EXPECT_EQ(e.witness(), std::make_pair(std::size_t{0}, std::size_t{1}));
  }
}

TEST(MonotoneDual, VariantParsingRoundTrip) {
  for (auto v : {DualVariant::prime, DualVariant::dagger, DualVariant::star, DualVariant::circ, DualVariant::bullet})
    EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_FALSE(parse_variant("sharp"));
}

TEST(VerifyMapDuality, ReportsFirstCounterexample) {
  const std::vector<std::vector<int>> psi{{1, 1}, {0, 1}};
  const std::vector<std::size_t> m{0, 1}, bad{1, 0};
  const auto ok = verify_map_duality(psi, m, m);
  EXPECT_TRUE(ok.ok);
  EXPECT_EQ(ok.pairs_checked, 4u);
  const auto r = verify_map_duality(psi, m, bad);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.counterexample->x, 1u);
  EXPECT_EQ(r.counterexample->y, 0u);
  EXPECT_EQ(r.counterexample->lhs, 0);
  EXPECT_EQ(r.counterexample->rhs, 1);
}

TEST(VerifyMapDuality, RelaxedModes) {
  const std::vector<std::vector<int>> psi{{1, 1}, {0, 1}};
  const std::vector<std::size_t> id{0, 1}, up{1, 1};
  // psi(x, 1) >= psi(x, y): identity vs constant 1 is subdual, not superdual.
  EXPECT_TRUE(verify_map_duality(psi, id, up, DualityMode::subdual).ok);
  EXPECT_FALSE(verify_map_duality(psi, id, up, DualityMode::superdual).ok);
  EXPECT_FALSE(verify_map_duality(psi, id, up).ok);
}

TEST(VerifyMapDuality, ShapeErrors) {
  const std::vector<std::vector<int>> psi{{1, 1}, {0, 1}};
  EXPECT_THROW(verify_map_duality(psi, {0}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(verify_map_duality(psi, {0, 2}, {0, 1}), std::invalid_argument);
}

TEST(Gray, NoEventsGivesSingleton) {
  const auto s = share(boolean_lattice(2));
  for (std::size_t y = 0; y < 4; ++y) {
    EXPECT_EQ(gray_zeta_oracle(s, {}, y, 0, 1), ElementSet::from_indices(4, {y}));
    EXPECT_EQ(gray_bullet_flow(s, {}, y), ElementSet::from_indices(4, {y}));
  }
}

TEST(Gray, HandExampleOneEvent) {
  // m = x v e_0 on {0,1}^2; minimal x with m(x) >= y.
  const auto sp = site_space(2, 2);
  const auto m = spin_flip_map(sp, 0, ElementSet::full(4), true);
  const std::vector<TimedMap> ev{{m, 0.5}};
  EXPECT_EQ(gray_zeta_oracle(sp.poset, ev, state(sp, "11"), 0, 1), words(sp, {"01"}));
  EXPECT_EQ(gray_zeta_oracle(sp.poset, ev, state(sp, "10"), 0, 1), words(sp, {"00"}));
  EXPECT_TRUE(check_gray_equivalence(sp.poset, ev, 0, 1).ok);
}

TEST(Gray, OracleMatchesBulletFlowOnRandomMonotoneMaps) {
  testgen::Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = share(testgen::random_poset(rng, 3 + testgen::uniform_index(rng, 2)));
    std::vector<TimedMap> ev;
    const std::size_t k = testgen::uniform_index(rng, 4);
    for (std::size_t e = 0; e < k; ++e) ev.push_back({testgen::random_monotone_map(rng, p), 0.2 * static_cast<double>(e + 1)});
    const auto r = check_gray_equivalence(p, ev, 0, 1);
    EXPECT_TRUE(r.ok) << "trial " << trial << " y=" << (r.mismatch ? r.mismatch->y : 0);
  }
}

TEST(Gray, BudgetGuard) {
  const auto s = share(boolean_lattice(2));
  std::vector<TimedMap> ev;
  for (int e = 0; e < 5; ++e) ev.push_back({PosetMap::identity(s), 0.1 * (e + 1)});
  EXPECT_THROW(gray_zeta_oracle(s, ev, 0, 0, 1, 100), BudgetExceeded);
  EXPECT_THROW(gray_zeta_oracle(s, {{PosetMap::identity(s), 2.0}}, 0, 0, 1), std::invalid_argument);
}
