#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "orderdual/element_set.hpp"
#include "orderdual/errors.hpp"
#include "orderdual/poset.hpp"

namespace orderdual {

inline constexpr std::size_t kNoElement = static_cast<std::size_t>(-1);

/// Join/meet tables of a finite poset. Entries are kNoElement where the
/// supremum (infimum) does not exist.
struct LatticeInfo {
  PosetPtr base;
  std::vector<std::size_t> join_table;
  std::vector<std::size_t> meet_table;
  std::optional<std::size_t> bottom;
  std::optional<std::size_t> top;
  bool is_join_semilattice = false;
  bool is_meet_semilattice = false;
  bool is_lattice = false;
  bool is_distributive = false;
  /// First (x, y, z) with x^(yvz) != (x^y)v(x^z), when is_lattice && !is_distributive.
  std::optional<std::array<std::size_t, 3>> distributivity_witness;

  std::size_t size() const { return base->size(); }
  std::size_t join(std::size_t x, std::size_t y) const { return join_table[x * size() + y]; }
  std::size_t meet(std::size_t x, std::size_t y) const { return meet_table[x * size() + y]; }
};

namespace detail {

// Least element of `bounds` (which is {x}^ n {y}^ or its dual), if any.
inline std::size_t least_of(const Poset& p, const std::vector<std::size_t>& bounds, bool upward) {
  for (auto z : bounds) {
    bool least = true;
    for (auto w : bounds)
      if (upward ? !p.leq(z, w) : !p.leq(w, z)) {
        least = false;
        break;
      }
    if (least) return z;
  }
  return kNoElement;
}

}  // namespace detail

/// Computes joins and meets from their defining property
/// {x}^ n {y}^ = {x v y}^ and decides distributivity by checking every triple.
inline LatticeInfo analyze_lattice(PosetPtr p) {
  LatticeInfo info;
  info.base = p;
  const std::size_t n = p->size();
  info.join_table.assign(n * n, kNoElement);
  info.meet_table.assign(n * n, kNoElement);
  info.is_join_semilattice = info.is_meet_semilattice = true;
  std::vector<std::size_t> ups, downs;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) {
      ups.clear();
      downs.clear();
      for (std::size_t z = 0; z < n; ++z) {
        if (p->leq(x, z) && p->leq(y, z)) ups.push_back(z);
        if (p->leq(z, x) && p->leq(z, y)) downs.push_back(z);
      }
      const auto j = detail::least_of(*p, ups, true);
      const auto m = detail::least_of(*p, downs, false);
      info.join_table[x * n + y] = info.join_table[y * n + x] = j;
      info.meet_table[x * n + y] = info.meet_table[y * n + x] = m;
      if (j == kNoElement) info.is_join_semilattice = false;
      if (m == kNoElement) info.is_meet_semilattice = false;
    }
  for (std::size_t z = 0; z < n; ++z) {
    bool is_bottom = true, is_top = true;
    for (std::size_t w = 0; w < n; ++w) {
      is_bottom = is_bottom && p->leq(z, w);
      is_top = is_top && p->leq(w, z);
    }
    if (is_bottom) info.bottom = z;
    if (is_top) info.top = z;
  }
  info.is_lattice = n > 0 && info.is_join_semilattice && info.is_meet_semilattice;
  if (info.is_lattice) {
    info.is_distributive = true;
    for (std::size_t x = 0; x < n && info.is_distributive; ++x)
      for (std::size_t y = 0; y < n && info.is_distributive; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          const auto lhs = info.meet(x, info.join(y, z));
          const auto rhs = info.join(info.meet(x, y), info.meet(x, z));
          if (lhs != rhs) {
            info.is_distributive = false;
            info.distributivity_witness = std::array<std::size_t, 3>{x, y, z};
            break;
          }
        }
  }
  return info;
}

inline LatticeInfo analyze_lattice(const Poset& p) { return analyze_lattice(share(p)); }

/// Nonzero elements x with x = a v b implying x in {a, b}.
inline ElementSet join_irreducibles(const LatticeInfo& lat) {
  if (!lat.is_lattice) throw std::invalid_argument("join_irreducibles: not a lattice");
  const std::size_t n = lat.size();
  ElementSet out(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (x == *lat.bottom) continue;
    bool irreducible = true;
    for (std::size_t a = 0; a < n && irreducible; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (lat.join(a, b) == x && a != x && b != x) {
          irreducible = false;
          break;
        }
    if (irreducible) out.insert(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Families of subsets of a ground poset.

/// A deduplicated, indexed list of subsets of a ground poset.
class SetFamily {
 public:
  SetFamily() = default;
  SetFamily(PosetPtr ground, std::vector<ElementSet> sets) : ground_(std::move(ground)) {
    for (auto& s : sets) add(std::move(s));
  }

  const PosetPtr& ground() const { return ground_; }
  const std::vector<ElementSet>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  const ElementSet& operator[](std::size_t k) const { return sets_[k]; }

  std::optional<std::size_t> index_of(const ElementSet& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t at(const ElementSet& s) const {
    auto k = index_of(s);
    if (!k) throw std::out_of_range("SetFamily: " + s.to_string() + " is not a member");
    return *k;
  }
  bool contains(const ElementSet& s) const { return index_.count(s) != 0; }

  /// Returns the index of `s`, appending it if new.
  std::size_t add(ElementSet s) {
    if (s.universe() != ground_->size()) throw std::invalid_argument("SetFamily: set over the wrong ground");
    if (auto k = index_of(s)) return *k;
    index_.emplace(s, sets_.size());
    sets_.push_back(std::move(s));
    return sets_.size() - 1;
  }

  bool union_closed() const {
    if (!contains(ElementSet(ground_->size()))) return false;
    for (const auto& a : sets_)
      for (const auto& b : sets_)
        if (!contains(a | b)) return false;
    return true;
  }
  bool intersection_closed() const {
    for (const auto& a : sets_)
      for (const auto& b : sets_)
        if (!contains(a & b)) return false;
    return true;
  }
  bool decreasing_family() const {
    return std::all_of(sets_.begin(), sets_.end(), [&](const ElementSet& s) { return is_decreasing(*ground_, s); });
  }

  /// The family as a poset under inclusion; member k is element k.
  Poset inclusion_poset() const {
    Relation rel(size(), std::vector<bool>(size()));
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < size(); ++a) {
      labels.push_back(sets_[a].to_string());
      for (std::size_t b = 0; b < size(); ++b) rel[a][b] = sets_[a].subset_of(sets_[b]);
    }
    return Poset::from_relation(rel, std::move(labels), std::max(size(), kDefaultElementCap));
  }

 private:
  PosetPtr ground_ = share(Poset(0));
  std::vector<ElementSet> sets_;
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index_;
};

/// P_dec(ground) in numeric mask order. On a trivially ordered ground of k
/// points the index of a set equals its bit mask.
inline SetFamily decreasing_family(PosetPtr ground) {
  auto sets = decreasing_sets(*ground);
  return SetFamily(std::move(ground), std::move(sets));
}

/// P_inc(ground), likewise sorted.
inline SetFamily increasing_family(PosetPtr ground) {
  auto sets = increasing_sets(*ground);
  return SetFamily(std::move(ground), std::move(sets));
}

// ---------------------------------------------------------------------------
// Birkhoff representation.

struct BirkhoffIso {
  /// Join-irreducibles of the lattice, in increasing index order.
  std::vector<std::size_t> irreducibles;
  /// The induced order on `irreducibles`; element k is irreducibles[k].
  PosetPtr ground;
  /// P_dec(ground).
  SetFamily down_sets;
  /// iso[x] = index in down_sets of {j irreducible : j <= x}.
  std::vector<std::size_t> iso;
};

struct NotDistributive {
  std::array<std::size_t, 3> witness;
};

using BirkhoffResult = std::variant<BirkhoffIso, NotDistributive>;

namespace detail {

inline bool check_birkhoff_iso(const LatticeInfo& lat, const BirkhoffIso& b) {
  const std::size_t n = lat.size();
  if (b.down_sets.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (auto k : b.iso) {
    if (k >= n || hit[k]) return false;
    hit[k] = true;
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const auto& sx = b.down_sets[b.iso[x]];
      const auto& sy = b.down_sets[b.iso[y]];
      if (b.down_sets[b.iso[lat.join(x, y)]] != (sx | sy)) return false;
      if (b.down_sets[b.iso[lat.meet(x, y)]] != (sx & sy)) return false;
    }
  return true;
}

}  // namespace detail

/// For a distributive lattice, returns the poset of join-irreducibles and the
/// verified isomorphism x -> {j : j <= x} onto its decreasing sets.
inline BirkhoffResult birkhoff_represent(const LatticeInfo& lat) {
  if (!lat.is_lattice) throw std::invalid_argument("birkhoff_represent: not a lattice");
  if (!lat.is_distributive) return NotDistributive{*lat.distributivity_witness};
  const auto& p = *lat.base;
  BirkhoffIso b;
  b.irreducibles = join_irreducibles(lat).members();
  const std::size_t k = b.irreducibles.size();
  Relation rel(k, std::vector<bool>(k));
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < k; ++a) {
    labels.push_back(p.label(b.irreducibles[a]));
    for (std::size_t c = 0; c < k; ++c) rel[a][c] = p.leq(b.irreducibles[a], b.irreducibles[c]);
  }
  b.ground = share(Poset::from_relation(rel, std::move(labels)));
  b.down_sets = decreasing_family(b.ground);
  for (std::size_t x = 0; x < p.size(); ++x) {
    ElementSet s(k);
    for (std::size_t a = 0; a < k; ++a)
      if (p.leq(b.irreducibles[a], x)) s.insert(a);
    auto idx = b.down_sets.index_of(s);
    if (!idx) throw std::logic_error("birkhoff_represent: image is not a decreasing set");
    b.iso.push_back(*idx);
  }
  if (!detail::check_birkhoff_iso(lat, b)) throw std::logic_error("birkhoff_represent: isomorphism check failed");
  return b;
}

// ---------------------------------------------------------------------------
// Join-semilattices of sets and extension of additive maps.

/// Embeds a lattice (bounded below suffices) as the union-closed family
/// x -> complement of {x}^ over the lattice's own elements. Member k of the
/// result is the image of element k.
inline SetFamily embed_join_semilattice(const LatticeInfo& lat) {
  if (!lat.is_join_semilattice || !lat.bottom) throw std::invalid_argument("embed_join_semilattice: need a join-semilattice bounded below");
  const auto& p = *lat.base;
  std::vector<ElementSet> members;
  for (std::size_t x = 0; x < p.size(); ++x) members.push_back(principal_up(p, x).complement());
  SetFamily fam(lat.base, std::move(members));
  if (fam.size() != p.size()) throw std::logic_error("embed_join_semilattice: embedding is not injective");
  return fam;
}

/// An additive map on all of P_dec(ground) together with its index space.
struct ExtendedMap {
  SetFamily space;              // P_dec(ground), numeric order
  std::vector<std::size_t> img; // over space indices
};

/// Extends an additive self-map of a union-closed family of decreasing sets to an
/// additive self-map of P_dec(ground).
///
/// Missing decreasing sets x are adjoined one at a time, by ascending cardinality
/// then ascending index in P_dec(ground). Each step sets, for y in the current
/// family F,
///     m(x u y) := m(y) u  n{ m(z) : x c z in F },
/// where an empty intersection is the whole ground set.
inline ExtendedMap extend_additive_map(const SetFamily& family, const std::vector<std::size_t>& img) {
  if (img.size() != family.size()) throw std::invalid_argument("extend_additive_map: image length mismatch");
  if (!family.union_closed()) throw std::invalid_argument("extend_additive_map: family is not union-closed");
  if (!family.decreasing_family()) throw std::invalid_argument("extend_additive_map: family has non-decreasing members");
  const std::size_t ground_n = family.ground()->size();
  const ElementSet empty(ground_n);
  // Additivity on the family.
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (img[k] >= family.size()) throw std::invalid_argument("extend_additive_map: image outside the family");
  }
  if (!family[img[family.at(empty)]].empty()) throw NotAdditive("extend_additive_map: m(empty) is not empty", family.at(empty));
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = 0; b < family.size(); ++b) {
      const auto u = family.at(family[a] | family[b]);
      if (family[img[u]] != (family[img[a]] | family[img[b]]))
        throw NotAdditive("extend_additive_map: m is not additive on the family", u);
    }

  ExtendedMap out{decreasing_family(family.ground()), {}};
  const auto& full = out.space;
  std::vector<std::optional<ElementSet>> value(full.size());
  std::vector<std::size_t> current;  // indices (in full) of the current family
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto f = full.at(family[k]);
    value[f] = family[img[k]];
    current.push_back(f);
  }
  std::vector<std::size_t> pending;
  for (std::size_t f = 0; f < full.size(); ++f)
    if (!value[f]) pending.push_back(f);
  std::stable_sort(pending.begin(), pending.end(),
                   [&](auto a, auto b) { return full[a].count() < full[b].count(); });

  for (auto xf : pending) {
    if (value[xf]) continue;
    const auto& x = full[xf];
    ElementSet cap = ElementSet::full(ground_n);
    for (auto zf : current)
      if (x.subset_of(full[zf])) cap &= *value[zf];
    std::vector<std::size_t> added;
    for (auto yf : current) {
      const auto wf = full.at(x | full[yf]);
      if (value[wf]) continue;
      value[wf] = *value[yf] | cap;
      added.push_back(wf);
    }
    current.insert(current.end(), added.begin(), added.end());
  }
  out.img.resize(full.size());
  for (std::size_t f = 0; f < full.size(); ++f) out.img[f] = full.at(*value[f]);
  return out;
}

// ---------------------------------------------------------------------------
// Fixtures.

/// M3: bottom 0, atoms 1, 2, 3, top 4.
inline Poset diamond_m3() {
  return Poset::from_covers(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}, {"0", "a", "b", "c", "1"});
}

/// N5 (pentagon): 0 < a < b < 1 and 0 < c < 1 with c incomparable to a, b.
inline Poset pentagon_n5() {
  return Poset::from_covers(5, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}}, {"0", "a", "b", "c", "1"});
}

/// P(ground) as the product of `k` two-element chains (index = bit mask).
inline Poset boolean_lattice(std::size_t k) { return grid_poset(k, 2); }

}  // namespace orderdual
