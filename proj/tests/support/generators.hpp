#pragma once

// Hand-rolled random generators for property tests. Everything is driven by an
// explicit std::mt19937_64 so failures reproduce from the printed seed.

#include <cstddef>
#include <random>
#include <vector>

#include "orderdual/lattice.hpp"
#include "orderdual/maps.hpp"
#include "orderdual/poset.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Random DAG on 0..n-1 (edges only from lower to higher index) with edge
/// probability p, closed transitively.
inline orderdual::Poset random_poset(Rng& rng, std::size_t n, double p = 0.4) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng, p)) edges.emplace_back(i, j);
  return orderdual::Poset::from_covers(n, edges);
}

/// A random poset that is a lattice: a random poset with a fresh bottom and top
/// adjoined, kept only if joins exist. Falls back to a chain.
inline orderdual::Poset random_lattice(Rng& rng, std::size_t n, double p = 0.5) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    const std::size_t inner = n >= 2 ? n - 2 : 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < inner; ++i)
      for (std::size_t j = i + 1; j < inner; ++j)
        if (coin(rng, p)) edges.emplace_back(i + 1, j + 1);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      edges.emplace_back(0, i);
      edges.emplace_back(i, n - 1);
    }
    if (n == 2) edges.emplace_back(0, 1);
    auto poset = orderdual::Poset::from_covers(n, edges);
    if (orderdual::analyze_lattice(poset).is_lattice) return poset;
  }
  return orderdual::Poset::chain(n);
}

inline std::vector<std::size_t> random_map_table(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::size_t> img(n);
  for (auto& v : img) v = uniform_index(rng, m);
  return img;
}

/// A random monotone self-map. Images are drawn in a linear-extension order from
/// the elements above every image already fixed below; a dead end restarts, and
/// after repeated dead ends a constant map is returned.
inline orderdual::PosetMap random_monotone_map(Rng& rng, const orderdual::PosetPtr& p) {
  const auto& s = *p;
  const auto order = s.linear_extension();
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::size_t> img(s.size(), 0);
    bool ok = true;
    for (std::size_t k = 0; k < order.size() && ok; ++k) {
      const auto x = order[k];
      std::vector<std::size_t> allowed;
      for (std::size_t z = 0; z < s.size(); ++z) {
        bool above = true;
        for (std::size_t j = 0; j < k && above; ++j)
          if (s.less(order[j], x)) above = s.leq(img[order[j]], z);
        if (above) allowed.push_back(z);
      }
      if (allowed.empty()) ok = false;
      else img[x] = allowed[uniform_index(rng, allowed.size())];
    }
    if (ok) return orderdual::PosetMap(p, std::move(img));
  }
  return orderdual::PosetMap(p, std::vector<std::size_t>(s.size(), uniform_index(rng, s.size())));
}

/// Every additive self-map of a small lattice, by brute force over all maps
/// fixing the bottom.
inline std::vector<orderdual::PosetMap> all_additive_maps(const orderdual::LatticeInfo& lat) {
  const std::size_t n = lat.size();
  std::vector<orderdual::PosetMap> out;
  std::vector<std::size_t> img(n, 0);
  std::size_t total = 1;
  for (std::size_t k = 1; k < n; ++k) total *= n;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t x = 0; x < n; ++x) {
      if (x == *lat.bottom) {
        img[x] = *lat.bottom;
        continue;
      }
      img[x] = rest % n;
      rest /= n;
    }
    bool additive = true;
    for (std::size_t x = 0; x < n && additive; ++x)
      for (std::size_t y = 0; y < n && additive; ++y) additive = img[lat.join(x, y)] == lat.join(img[x], img[y]);
    if (additive) out.emplace_back(lat.base, img);
  }
  return out;
}

/// Random additive self-map of P_dec(ground) from a random M-set.
inline std::vector<std::size_t> random_additive_on_family(Rng& rng, const orderdual::SetFamily& fam, double p = 0.4) {
  const auto& ground = *fam.ground();
  const std::size_t k = ground.size();
  // m({i}v) for each i: a random decreasing set, made monotone in i by taking
  // unions over everything below.
  std::vector<orderdual::ElementSet> base(k, orderdual::ElementSet(k));
  for (std::size_t i = 0; i < k; ++i) {
    orderdual::ElementSet s(k);
    for (std::size_t j = 0; j < k; ++j)
      if (coin(rng, p)) s.insert(j);
    base[i] = orderdual::down_set(ground, s);
  }
  std::vector<orderdual::ElementSet> gen(k, orderdual::ElementSet(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (ground.leq(j, i)) gen[i] |= base[j];
  std::vector<std::size_t> img(fam.size());
  for (std::size_t a = 0; a < fam.size(); ++a) {
    orderdual::ElementSet out(k);
    fam[a].for_each([&](std::size_t i) { out |= gen[i]; });
    img[a] = fam.at(out);
  }
  return img;
}

}  // namespace testgen
