#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orderdual/duality.hpp"
#include "orderdual/element_set.hpp"
#include "orderdual/errors.hpp"
#include "orderdual/lattice.hpp"
#include "orderdual/maps.hpp"
#include "orderdual/markov.hpp"
#include "orderdual/matrix.hpp"
#include "orderdual/percolation.hpp"
#include "orderdual/poset.hpp"

namespace orderdual {

// ---------------------------------------------------------------------------
// Site spaces {0, ..., levels-1}^sites.

/// Product of `sites` chains of length `levels`; site 0 is the fastest digit of
/// a state index, so for levels = 2 the index is the bit mask of occupied sites.
struct SiteSpace {
  std::size_t sites = 0;
  std::size_t levels = 2;
  MixedRadix radix;
  PosetPtr poset;

  std::size_t size() const { return poset->size(); }
  std::size_t digit(std::size_t x, std::size_t i) const { return radix.digit(x, i); }
  std::vector<std::size_t> decode(std::size_t x) const { return radix.decode(x); }
  std::size_t encode(const std::vector<std::size_t>& c) const { return radix.encode(c); }
};

inline SiteSpace site_space(std::size_t sites, std::size_t levels) {
  if (levels < 1) throw ModelError("site_space: need at least one level");
  return {sites, levels, MixedRadix(std::vector<std::size_t>(sites, levels)), share(grid_poset(sites, levels))};
}

/// x'(i) = levels - 1 - x(i) at every site.
inline std::vector<std::size_t> reflection_prime(const SiteSpace& sp) {
  std::vector<std::size_t> prime(sp.size());
  for (std::size_t x = 0; x < sp.size(); ++x) {
    auto c = sp.decode(x);
    for (auto& v : c) v = sp.levels - 1 - v;
    prime[x] = sp.encode(c);
  }
  return prime;
}

inline DualityPairing reflection_pairing(const SiteSpace& sp) { return DualityPairing(sp.poset, reflection_prime(sp)); }

/// A self-map of the site space given by how it rewrites the digit vector.
template <class F>
PosetMap local_map(const SiteSpace& sp, F&& rewrite, std::string name) {
  std::vector<std::size_t> img(sp.size());
  for (std::size_t x = 0; x < sp.size(); ++x) {
    auto c = sp.decode(x);
    rewrite(c);
    img[x] = sp.encode(c);
  }
  return PosetMap(sp.poset, std::move(img), std::move(name));
}

namespace detail {

inline void check_sites(const SiteSpace& sp, std::initializer_list<std::size_t> idx, const char* what) {
  std::vector<std::size_t> seen;
  for (auto i : idx) {
    if (i >= sp.sites) throw ModelError(std::string(what) + ": site " + std::to_string(i) + " out of range");
    if (std::find(seen.begin(), seen.end(), i) != seen.end())
      throw ModelError(std::string(what) + ": site indices must be distinct");
    seen.push_back(i);
  }
}

inline std::string idx_name(const std::string& stem, std::initializer_list<std::size_t> idx) {
  std::string s = stem + "_";
  for (auto i : idx) s += std::to_string(i);
  return s;
}

template <class Scalar>
void check_square(const std::vector<std::vector<Scalar>>& r, std::size_t n, const char* what) {
  if (r.empty()) return;
  if (r.size() != n) throw ModelError(std::string(what) + ": expected " + std::to_string(n) + " rows");
  for (std::size_t i = 0; i < n; ++i) {
    if (r[i].size() != n) throw ModelError(std::string(what) + ": row " + std::to_string(i) + " has the wrong length");
    if (r[i][i] != Scalar(0)) throw ModelError(std::string(what) + ": diagonal rate at " + std::to_string(i) + " must be 0");
    for (const auto& v : r[i])
      if (v < Scalar(0)) throw ModelError(std::string(what) + ": negative rate");
  }
}

template <class Scalar>
void check_vector(const std::vector<Scalar>& r, std::size_t n, const char* what) {
  if (r.empty()) return;
  if (r.size() != n) throw ModelError(std::string(what) + ": expected " + std::to_string(n) + " entries");
  for (const auto& v : r)
    if (v < Scalar(0)) throw ModelError(std::string(what) + ": negative rate");
}

template <class Scalar>
Scalar at_or_zero(const std::vector<Scalar>& v, std::size_t i) {
  return v.empty() ? Scalar(0) : v[i];
}

template <class Scalar>
Scalar at_or_zero(const std::vector<std::vector<Scalar>>& v, std::size_t i, std::size_t j) {
  return v.empty() ? Scalar(0) : v[i][j];
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Voter model and coalescing random walks on {0,1}^L.

/// vot_ij(x) = x with x(j) replaced by x(i).
inline PosetMap voter_map(const SiteSpace& sp, std::size_t i, std::size_t j) {
  detail::check_sites(sp, {i, j}, "voter_map");
  return local_map(sp, [&](std::vector<std::size_t>& c) { c[j] = c[i]; }, detail::idx_name("vot", {i, j}));
}

/// rw_ji(y) = (y \ {j}) u {i} if j in y, else y.
inline PosetMap rw_map(const SiteSpace& sp, std::size_t j, std::size_t i) {
  detail::check_sites(sp, {i, j}, "rw_map");
  return local_map(
      sp,
      [&](std::vector<std::size_t>& c) {
        if (c[j] == 1) {
          c[j] = 0;
          c[i] = 1;
        }
      },
      detail::idx_name("rw", {j, i}));
}

/// x' = complement on {0,1}^L, so <x,y> = 1{x and y are disjoint}.
inline DualityPairing complement_site_pairing(const SiteSpace& sp) {
  if (sp.levels != 2) throw ModelError("complement_site_pairing: needs two levels per site");
  return reflection_pairing(sp);
}

/// G f(x) = sum r_ij (f(vot_ij(x)) - f(x)); maps with zero rate are left out.
template <class Scalar = double>
BasicMappingRep<Scalar> build_voter(std::size_t sites, const std::vector<std::vector<Scalar>>& r) {
  detail::check_square(r, sites, "build_voter");
  const auto sp = site_space(sites, 2);
  BasicMappingRep<Scalar> rep(sp.poset);
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t j = 0; j < sites; ++j)
      if (i != j && detail::at_or_zero(r, i, j) > Scalar(0)) rep.add(voter_map(sp, i, j), r[i][j]);
  return rep;
}

/// Coalescing random walks: rw_ji at rate r_ij, listed in the same order as
/// build_voter, so map k here is the additive dual of map k there.
template <class Scalar = double>
BasicMappingRep<Scalar> build_coalescing_rw(std::size_t sites, const std::vector<std::vector<Scalar>>& r) {
  detail::check_square(r, sites, "build_coalescing_rw");
  const auto sp = site_space(sites, 2);
  BasicMappingRep<Scalar> rep(sp.poset);
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t j = 0; j < sites; ++j)
      if (i != j && detail::at_or_zero(r, i, j) > Scalar(0)) rep.add(rw_map(sp, j, i), r[i][j]);
  return rep;
}

// ---------------------------------------------------------------------------
// Two-stage contact process on {0,1,2}^L.

enum class KroneKind { a, b, c, d, e };

inline char to_char(KroneKind k) { return "abcde"[static_cast<int>(k)]; }

/// a_i: 1 -> 2 at i.  b_ij: x(i) = 2, x(j) = 0 -> x(j) = 1.  c_i: 1 -> 0 at i.
/// d_i: -> 0 at i.  e_i: 2 -> 1 at i.
inline PosetMap krone_map(const SiteSpace& sp, KroneKind kind, std::size_t i, std::size_t j = 0) {
  if (sp.levels != 3) throw ModelError("krone_map: needs three levels per site");
  if (kind == KroneKind::b) detail::check_sites(sp, {i, j}, "krone_map");
  else detail::check_sites(sp, {i}, "krone_map");
  const std::string stem(1, to_char(kind));
  switch (kind) {
    case KroneKind::a:
      return local_map(sp, [&](std::vector<std::size_t>& c) { if (c[i] == 1) c[i] = 2; }, detail::idx_name(stem, {i}));
    case KroneKind::b:
      return local_map(
          sp, [&](std::vector<std::size_t>& c) { if (c[i] == 2 && c[j] == 0) c[j] = 1; }, detail::idx_name(stem, {i, j}));
    case KroneKind::c:
      return local_map(sp, [&](std::vector<std::size_t>& c) { if (c[i] == 1) c[i] = 0; }, detail::idx_name(stem, {i}));
    case KroneKind::d:
      return local_map(sp, [&](std::vector<std::size_t>& c) { c[i] = 0; }, detail::idx_name(stem, {i}));
    case KroneKind::e:
      return local_map(sp, [&](std::vector<std::size_t>& c) { if (c[i] == 2) c[i] = 1; }, detail::idx_name(stem, {i}));
  }
  throw std::logic_error("krone_map: bad kind");
}

/// The dual of each Krone map under x' = 2 - x: a' = a, b'_ij = b_ji, c' = e,
/// d' = d, e' = c.
struct KroneLabel {
  KroneKind kind = KroneKind::a;
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const KroneLabel&, const KroneLabel&) = default;
};

inline KroneLabel krone_dual_label(KroneLabel l) {
  switch (l.kind) {
    case KroneKind::a: return l;
    case KroneKind::b: return {KroneKind::b, l.j, l.i};
    case KroneKind::c: return {KroneKind::e, l.i, 0};
    case KroneKind::d: return l;
    case KroneKind::e: return {KroneKind::c, l.i, 0};
  }
  return l;
}

/// Per-family rates; b is |L| x |L| with zero diagonal, the others have |L| entries.
template <class Scalar = double>
struct KroneRates {
  std::vector<Scalar> a, c, d, e;
  std::vector<std::vector<Scalar>> b;

  void validate(std::size_t sites) const {
    detail::check_vector(a, sites, "krone rates a");
    detail::check_vector(c, sites, "krone rates c");
    detail::check_vector(d, sites, "krone rates d");
    detail::check_vector(e, sites, "krone rates e");
    detail::check_square(b, sites, "krone rates b");
  }
};

/// Labels with positive rate, in the order a_i, b_ij, c_i, d_i, e_i.
template <class Scalar>
std::vector<std::pair<KroneLabel, Scalar>> krone_terms(std::size_t sites, const KroneRates<Scalar>& r) {
  r.validate(sites);
  std::vector<std::pair<KroneLabel, Scalar>> out;
  auto site_family = [&](KroneKind k, const std::vector<Scalar>& v) {
    for (std::size_t i = 0; i < sites; ++i)
      if (detail::at_or_zero(v, i) > Scalar(0)) out.push_back({{k, i, 0}, v[i]});
  };
  site_family(KroneKind::a, r.a);
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t j = 0; j < sites; ++j)
      if (i != j && detail::at_or_zero(r.b, i, j) > Scalar(0)) out.push_back({{KroneKind::b, i, j}, r.b[i][j]});
  site_family(KroneKind::c, r.c);
  site_family(KroneKind::d, r.d);
  site_family(KroneKind::e, r.e);
  return out;
}

template <class Scalar = double>
BasicMappingRep<Scalar> build_krone(std::size_t sites, const KroneRates<Scalar>& r) {
  const auto sp = site_space(sites, 3);
  BasicMappingRep<Scalar> rep(sp.poset);
  for (const auto& [l, rate] : krone_terms(sites, r)) rep.add(krone_map(sp, l.kind, l.i, l.j), rate);
  return rep;
}

/// The dual process written out from the table of dual labels (not computed
/// from preimages); map k is dual to map k of build_krone.
template <class Scalar = double>
BasicMappingRep<Scalar> build_krone_dual(std::size_t sites, const KroneRates<Scalar>& r) {
  const auto sp = site_space(sites, 3);
  BasicMappingRep<Scalar> rep(sp.poset);
  for (const auto& [l, rate] : krone_terms(sites, r)) {
    const auto dl = krone_dual_label(l);
    rep.add(krone_map(sp, dl.kind, dl.i, dl.j), rate);
  }
  return rep;
}

inline DualityPairing krone_pairing(const SiteSpace& sp) {
  if (sp.levels != 3) throw ModelError("krone_pairing: needs three levels per site");
  return reflection_pairing(sp);
}

/// L x {0,1} with (i,0) < (i,1); point (i,k) has index i + k|L|.
inline PosetPtr krone_ground(std::size_t sites) {
  Relation rel(2 * sites, std::vector<bool>(2 * sites));
  std::vector<std::string> labels(2 * sites);
  for (std::size_t i = 0; i < sites; ++i) {
    rel[i][i] = rel[i + sites][i + sites] = rel[i][i + sites] = true;
    labels[i] = std::to_string(i) + ".0";
    labels[i + sites] = std::to_string(i) + ".1";
  }
  return share(Poset::from_relation(rel, std::move(labels)));
}

/// Both set codings of {0,1,2}^L. Forward: x(i) = 0, 1, 2 <-> the i-column is
/// {}, {(i,0)}, {(i,0),(i,1)} in P_dec(L x {0,1}). Backward: y(i) = 0, 1, 2 <->
/// {}, {(i,1)}, {(i,0),(i,1)} in P_dec of the reversed ground, i.e. P_inc.
struct KroneSetCoding {
  SiteSpace space;
  DecSpace forward;
  DecSpace backward;
  std::vector<std::size_t> to_forward;   // state index -> forward.family index
  std::vector<std::size_t> to_backward;  // state index -> backward.family index
  std::vector<std::size_t> from_forward;
  std::vector<std::size_t> from_backward;

  ElementSet forward_set(std::size_t x) const { return forward.set(to_forward[x]); }
  ElementSet backward_set(std::size_t y) const { return backward.set(to_backward[y]); }
};

inline KroneSetCoding krone_set_coding(std::size_t sites) {
  KroneSetCoding k;
  k.space = site_space(sites, 3);
  const auto g = krone_ground(sites);
  k.forward = make_dec_space(g);
  k.backward = make_dec_space(share(g->reversed()));
  const std::size_t n = k.space.size();
  k.to_forward.resize(n);
  k.to_backward.resize(n);
  k.from_forward.assign(k.forward.size(), n);
  k.from_backward.assign(k.backward.size(), n);
  for (std::size_t x = 0; x < n; ++x) {
    ElementSet f(2 * sites), b(2 * sites);
    for (std::size_t i = 0; i < sites; ++i) {
      const auto v = k.space.digit(x, i);
      if (v >= 1) f.insert(i);
      if (v == 2) f.insert(i + sites);
      if (v >= 1) b.insert(i + sites);
      if (v == 2) b.insert(i);
    }
    k.to_forward[x] = k.forward.index(f);
    k.to_backward[x] = k.backward.index(b);
    k.from_forward[k.to_forward[x]] = x;
    k.from_backward[k.to_backward[x]] = x;
  }
  return k;
}

struct CodingCheck {
  bool ok = true;
  std::string detail;
};

/// Both codings are bijections, preserve and reflect the order, and turn the
/// pairing 1{x <= 2 - y} into 1{forward(x) n backward(y) = empty}.
inline CodingCheck verify_krone_coding(const KroneSetCoding& k) {
  const auto& s = *k.space.poset;
  const std::size_t n = s.size();
  auto fail = [](std::string msg) { return CodingCheck{false, std::move(msg)}; };
  if (k.forward.size() != n || k.backward.size() != n) return fail("family sizes differ from the state count");
  for (std::size_t z = 0; z < n; ++z)
    if (k.from_forward[z] >= n || k.from_backward[z] >= n) return fail("coding is not onto");
  const auto pairing = krone_pairing(k.space);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const bool le = s.leq(x, y);
      if (le != k.forward_set(x).subset_of(k.forward_set(y)))
        return fail("forward coding breaks the order at " + s.label(x) + ", " + s.label(y));
      if (le != k.backward_set(x).subset_of(k.backward_set(y)))
        return fail("backward coding breaks the order at " + s.label(x) + ", " + s.label(y));
      const int want = pairing.pairing_value(x, y);
      const int got = k.forward_set(x).intersects(k.backward_set(y)) ? 0 : 1;
      if (want != got) return fail("pairing mismatch at " + s.label(x) + ", " + s.label(y));
    }
  return {};
}

/// A Krone map transported to P_dec(L x {0,1}).
inline PosetMap krone_forward_set_map(const KroneSetCoding& k, const PosetMap& m) {
  std::vector<std::size_t> img(k.forward.size());
  for (std::size_t z = 0; z < img.size(); ++z) img[z] = k.to_forward[m(k.from_forward[z])];
  return PosetMap(k.forward.poset, std::move(img), m.name());
}

/// The same map transported to the backward coding P_dec of the reversed ground.
inline PosetMap krone_backward_set_map(const KroneSetCoding& k, const PosetMap& m) {
  std::vector<std::size_t> img(k.backward.size());
  for (std::size_t z = 0; z < img.size(); ++z) img[z] = k.to_backward[m(k.from_backward[z])];
  return PosetMap(k.backward.poset, std::move(img), m.name());
}

/// The percolation glyphs of each Krone map, written out directly:
///   a_i  arrows (i,0) -> (i,1) and (i,1) -> (i,0)
///   b_ij arrow (i,1) -> (j,0)
///   c_i  block at (i,0), arrow (i,1) -> (i,0)
///   d_i  blocks at (i,0) and (i,1)
///   e_i  block at (i,1), arrow (i,1) -> (i,0)
/// Unblocked points keep their diagonal pair, and (i,1) -> (i,0) is present
/// whenever (i,1) is unblocked, as decreasing sets require.
inline MSet krone_glyph_mset(std::size_t sites, KroneLabel l) {
  const auto g = krone_ground(sites);
  auto lo = [&](std::size_t i) { return i; };
  auto hi = [&](std::size_t i) { return i + sites; };
  std::vector<std::size_t> blocked;
  std::vector<std::pair<std::size_t, std::size_t>> arrows;
  switch (l.kind) {
    case KroneKind::a: arrows = {{lo(l.i), hi(l.i)}, {hi(l.i), lo(l.i)}}; break;
    case KroneKind::b: arrows = {{hi(l.i), lo(l.j)}}; break;
    case KroneKind::c: blocked = {lo(l.i)}; arrows = {{hi(l.i), lo(l.i)}}; break;
    case KroneKind::d: blocked = {lo(l.i), hi(l.i)}; break;
    case KroneKind::e: blocked = {hi(l.i)}; arrows = {{hi(l.i), lo(l.i)}}; break;
  }
  MSet m(g);
  for (std::size_t p = 0; p < 2 * sites; ++p)
    if (std::find(blocked.begin(), blocked.end(), p) == blocked.end()) m.insert(p, p);
  for (std::size_t i = 0; i < sites; ++i)
    if (m.contains(hi(i), hi(i))) m.insert(hi(i), lo(i));
  for (auto [from, to] : arrows) m.insert(from, to);
  return m;
}

// ---------------------------------------------------------------------------
// Cooperative branching and friends on {0,1}^L.

/// a_ij: x(i) := x(j) (= vot_ji).
inline PosetMap coop_a(const SiteSpace& sp, std::size_t i, std::size_t j) {
  detail::check_sites(sp, {i, j}, "coop_a");
  return local_map(sp, [&](std::vector<std::size_t>& c) { c[i] = c[j]; }, detail::idx_name("a", {i, j}));
}

/// b_ijk: 110 -> 111 on the word x(i)x(j)x(k).
inline PosetMap coop_b(const SiteSpace& sp, std::size_t i, std::size_t j, std::size_t k) {
  detail::check_sites(sp, {i, j, k}, "coop_b");
  return local_map(
      sp, [&](std::vector<std::size_t>& c) { if (c[i] == 1 && c[j] == 1) c[k] = 1; }, detail::idx_name("b", {i, j, k}));
}

/// c_ij: 11 -> 01 and 10 -> 01 (= rw_ij).
inline PosetMap coop_c(const SiteSpace& sp, std::size_t i, std::size_t j) {
  detail::check_sites(sp, {i, j}, "coop_c");
  return local_map(
      sp,
      [&](std::vector<std::size_t>& c) {
        if (c[i] == 1) {
          c[i] = 0;
          c[j] = 1;
        }
      },
      detail::idx_name("c", {i, j}));
}

inline PosetMap coop_d(const SiteSpace& sp, std::size_t i) {
  detail::check_sites(sp, {i}, "coop_d");
  return local_map(sp, [&](std::vector<std::size_t>& c) { c[i] = 0; }, detail::idx_name("d", {i}));
}

/// e_ij: swaps x(i) and x(j).
inline PosetMap coop_e(const SiteSpace& sp, std::size_t i, std::size_t j) {
  detail::check_sites(sp, {i, j}, "coop_e");
  return local_map(sp, [&](std::vector<std::size_t>& c) { std::swap(c[i], c[j]); }, detail::idx_name("e", {i, j}));
}

/// b(1)_ijk: 001 -> 011.
inline PosetMap coop_b1(const SiteSpace& sp, std::size_t i, std::size_t j, std::size_t k) {
  detail::check_sites(sp, {i, j, k}, "coop_b1");
  return local_map(
      sp, [&](std::vector<std::size_t>& c) { if (c[i] == 0 && c[j] == 0 && c[k] == 1) c[j] = 1; },
      detail::idx_name("b1", {i, j, k}));
}

/// b(2)_ijk: 001 -> 101.
inline PosetMap coop_b2(const SiteSpace& sp, std::size_t i, std::size_t j, std::size_t k) {
  detail::check_sites(sp, {i, j, k}, "coop_b2");
  return local_map(
      sp, [&](std::vector<std::size_t>& c) { if (c[i] == 0 && c[j] == 0 && c[k] == 1) c[i] = 1; },
      detail::idx_name("b2", {i, j, k}));
}

/// r is indexed [i][j][k]; entries with repeated indices must be zero.
template <class Scalar = double>
struct CoopRates {
  std::vector<std::vector<std::vector<Scalar>>> branching;  // r_ijk
  std::vector<std::vector<Scalar>> walk;                    // s_ij, maps c_ij
  std::vector<std::vector<Scalar>> voter;                   // maps a_ij
  std::vector<Scalar> death;                                // d_i
  std::vector<std::vector<Scalar>> exclusion;               // e_ij

  void validate(std::size_t sites) const {
    if (!branching.empty()) {
      if (branching.size() != sites) throw ModelError("coop branching rates: expected " + std::to_string(sites) + " slices");
      for (std::size_t i = 0; i < sites; ++i) {
        if (branching[i].size() != sites) throw ModelError("coop branching rates: bad shape");
        for (std::size_t j = 0; j < sites; ++j) {
          if (branching[i][j].size() != sites) throw ModelError("coop branching rates: bad shape");
          for (std::size_t k = 0; k < sites; ++k) {
            const auto v = branching[i][j][k];
            if (v < Scalar(0)) throw ModelError("coop branching rates: negative rate");
            if ((i == j || j == k || i == k) && v != Scalar(0))
              throw ModelError("coop branching rates: index clash at (" + std::to_string(i) + "," + std::to_string(j) +
                               "," + std::to_string(k) + ")");
          }
        }
      }
    }
    detail::check_square(walk, sites, "coop walk rates");
    detail::check_square(voter, sites, "coop voter rates");
    detail::check_vector(death, sites, "coop death rates");
    detail::check_square(exclusion, sites, "coop exclusion rates");
  }
};

/// One map of a cooperative-branching model together with the maps whose
/// union of images is its star dual: b*_ijk = b(1)_ijk u b(2)_ijk, and for the
/// additive maps the single dual a* = c, c* = a, d* = d, e* = e.
struct CoopTerm {
  PosetMap map;
  std::vector<PosetMap> star_parts;
};

/// A union of pointwise maps acting on sets: B -> m_1(B) u ... u m_r(B).
inline ElementSet apply_union(const std::vector<PosetMap>& parts, const ElementSet& b) {
  ElementSet out(b.universe());
  for (const auto& m : parts) out = out | m.image(b);
  return out;
}

template <class Scalar>
std::vector<std::pair<CoopTerm, Scalar>> coop_terms(std::size_t sites, const CoopRates<Scalar>& r) {
  r.validate(sites);
  const auto sp = site_space(sites, 2);
  std::vector<std::pair<CoopTerm, Scalar>> out;
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t j = 0; j < sites; ++j)
      for (std::size_t k = 0; k < sites; ++k)
        if (!r.branching.empty() && r.branching[i][j][k] > Scalar(0))
          out.push_back({{coop_b(sp, i, j, k), {coop_b1(sp, i, j, k), coop_b2(sp, i, j, k)}}, r.branching[i][j][k]});
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t j = 0; j < sites; ++j)
      if (i != j && detail::at_or_zero(r.walk, i, j) > Scalar(0))
        out.push_back({{coop_c(sp, i, j), {coop_a(sp, i, j)}}, r.walk[i][j]});
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t j = 0; j < sites; ++j)
      if (i != j && detail::at_or_zero(r.voter, i, j) > Scalar(0))
        out.push_back({{coop_a(sp, i, j), {coop_c(sp, i, j)}}, r.voter[i][j]});
  for (std::size_t i = 0; i < sites; ++i)
    if (detail::at_or_zero(r.death, i) > Scalar(0)) out.push_back({{coop_d(sp, i), {coop_d(sp, i)}}, r.death[i]});
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t j = 0; j < sites; ++j)
      if (i != j && detail::at_or_zero(r.exclusion, i, j) > Scalar(0))
        out.push_back({{coop_e(sp, i, j), {coop_e(sp, i, j)}}, r.exclusion[i][j]});
  return out;
}

template <class Scalar = double>
BasicMappingRep<Scalar> build_coop_branching(std::size_t sites, const CoopRates<Scalar>& r) {
  const auto sp = site_space(sites, 2);
  BasicMappingRep<Scalar> rep(sp.poset);
  for (auto& [term, rate] : coop_terms(sites, r)) rep.add(std::move(term.map), rate);
  return rep;
}

// ---------------------------------------------------------------------------
// Siegmund duality on the chain {0, ..., n}.

inline PosetPtr siegmund_space(std::size_t n) { return share(Poset::chain(n + 1)); }

/// S' is the reversed chain with x' = x.
inline DualityPairing siegmund_pairing(const PosetPtr& chain) { return DualityPairing(chain); }

/// A self-map of a chain is additive iff it is monotone and fixes 0. Throws
/// NotMonotone (with witness) or ModelError when m(0) != 0.
inline void check_siegmund_map(const PosetMap& m) {
  const auto mono = is_monotone(m);
  if (!mono.holds)
    throw NotMonotone("siegmund: " + m.name() + " is not monotone: " + mono.detail, mono.witness->first, mono.witness->second);
  if (m(0) != 0) throw ModelError("siegmund: " + m.name() + " moves the trap: m(0) = " + std::to_string(m(0)));
  if (!is_additive(m).holds) throw std::logic_error("siegmund: chain criterion disagrees with is_additive for " + m.name());
}

/// Maps are given as image tables over {0, ..., n}.
template <class Scalar = double>
BasicMappingRep<Scalar> build_siegmund(std::size_t n, const std::vector<std::vector<std::size_t>>& maps,
                                       const std::vector<Scalar>& rates, std::vector<std::string> names = {}) {
  if (maps.size() != rates.size()) throw ModelError("build_siegmund: map and rate counts differ");
  const auto chain = siegmund_space(n);
  BasicMappingRep<Scalar> rep(chain);
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (maps[k].size() != n + 1) throw ModelError("build_siegmund: map " + std::to_string(k) + " has the wrong length");
    for (auto v : maps[k])
      if (v > n) throw ModelError("build_siegmund: map " + std::to_string(k) + " leaves the chain");
    PosetMap m(chain, maps[k], k < names.size() ? names[k] : "m" + std::to_string(k));
    check_siegmund_map(m);
    rep.add(std::move(m), rates[k]);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Monotone functions as sums of indicators of increasing sets.

template <class Scalar>
struct IndicatorTerm {
  Scalar coefficient;
  ElementSet set;
};

/// With r_1 < ... < r_m the distinct values of f and A_k = {f >= r_k},
/// f = r_1 1_S + sum_{k>=2} (r_k - r_{k-1}) 1_{A_k}. The base term always comes
/// first (possibly with coefficient zero). Throws NotMonotone.
template <class Scalar>
std::vector<IndicatorTerm<Scalar>> monotone_indicator_decomposition(const Poset& s, const std::vector<Scalar>& f) {
  if (f.size() != s.size()) throw std::invalid_argument("monotone_indicator_decomposition: f has the wrong length");
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y)
      if (s.leq(x, y) && f[y] < f[x])
        throw NotMonotone("monotone_indicator_decomposition: f(" + s.label(x) + ") > f(" + s.label(y) + ")", x, y);
  std::vector<IndicatorTerm<Scalar>> out;
  if (s.size() == 0) return out;
  std::vector<Scalar> values(f.begin(), f.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  out.push_back({values.front(), ElementSet::full(s.size())});
  for (std::size_t k = 1; k < values.size(); ++k) {
    ElementSet a(s.size());
    for (std::size_t x = 0; x < s.size(); ++x)
      if (!(f[x] < values[k])) a.insert(x);
    out.push_back({values[k] - values[k - 1], std::move(a)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Attractive spin systems.

/// beta[i][x] and delta[i][x] for every site i and state x of {0,1}^L.
template <class Scalar>
struct SpinRates {
  std::vector<std::vector<Scalar>> beta;
  std::vector<std::vector<Scalar>> delta;
};

/// G f(x) = sum_i beta_i(x)(f(x v e_i) - f(x)) + delta_i(x)(f(x ^ (1 - e_i)) - f(x)).
template <class Scalar>
Matrix<Scalar> spin_generator(std::size_t sites, const SpinRates<Scalar>& r) {
  const std::size_t n = std::size_t{1} << sites;
  Matrix<Scalar> q(n, n);
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t bit = std::size_t{1} << i;
      const Scalar rate = (x & bit) ? r.delta[i][x] : r.beta[i][x];
      const std::size_t y = x ^ bit;
      q(x, y) += rate;
      q(x, x) -= rate;
    }
  return q;
}

/// m(x) = x v e_i for x in A (birth) or x ^ (1 - e_i) for x in A (death).
inline PosetMap spin_flip_map(const SiteSpace& sp, std::size_t i, const ElementSet& a, bool birth) {
  std::vector<std::size_t> img(sp.size());
  const std::size_t bit = std::size_t{1} << i;
  for (std::size_t x = 0; x < sp.size(); ++x) img[x] = a.contains(x) ? (birth ? (x | bit) : (x & ~bit)) : x;
  return PosetMap(sp.poset, std::move(img), std::string(birth ? "up_" : "down_") + std::to_string(i) + a.to_string());
}

/// Each beta_i is split into indicators of increasing sets A with maps
/// x -> x v e_i on A; each delta_i into indicators of decreasing sets with maps
/// x -> x ^ (1 - e_i). Terms with zero coefficient are dropped.
template <class Scalar>
BasicMappingRep<Scalar> decompose_attractive_spin(std::size_t sites, const SpinRates<Scalar>& r) {
  const auto sp = site_space(sites, 2);
  const std::size_t n = sp.size();
  if (r.beta.size() != sites || r.delta.size() != sites) throw ModelError("decompose_attractive_spin: need one table per site");
  for (std::size_t i = 0; i < sites; ++i) {
    if (r.beta[i].size() != n || r.delta[i].size() != n) throw ModelError("decompose_attractive_spin: bad table length");
    for (std::size_t x = 0; x < n; ++x)
      if (r.beta[i][x] < Scalar(0) || r.delta[i][x] < Scalar(0)) throw ModelError("decompose_attractive_spin: negative rate");
  }
  const auto& s = *sp.poset;
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (!s.leq(x, y)) continue;
        if (r.beta[i][x] > r.beta[i][y])
          throw NotMonotone("decompose_attractive_spin: beta_" + std::to_string(i) + " decreases from " + s.label(x) +
                                " to " + s.label(y),
                            x, y);
        if (r.delta[i][x] < r.delta[i][y])
          throw NotMonotone("decompose_attractive_spin: delta_" + std::to_string(i) + " increases from " + s.label(x) +
                                " to " + s.label(y),
                            x, y);
      }
  BasicMappingRep<Scalar> rep(sp.poset);
  const auto rev = s.reversed();
  for (std::size_t i = 0; i < sites; ++i) {
    for (const auto& t : monotone_indicator_decomposition(s, r.beta[i]))
      if (t.coefficient != Scalar(0)) rep.add(spin_flip_map(sp, i, t.set, true), t.coefficient);
    for (const auto& t : monotone_indicator_decomposition(rev, r.delta[i]))
      if (t.coefficient != Scalar(0)) rep.add(spin_flip_map(sp, i, t.set, false), t.coefficient);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Contact process.

/// bra_ij: a particle at i places one at j.
inline PosetMap branching_map(const SiteSpace& sp, std::size_t i, std::size_t j) {
  detail::check_sites(sp, {i, j}, "branching_map");
  return local_map(sp, [&](std::vector<std::size_t>& c) { if (c[i] == 1) c[j] = 1; }, detail::idx_name("bra", {i, j}));
}

/// bra_ij at rate lambda[i][j], d_i at rate delta[i].
template <class Scalar = double>
BasicMappingRep<Scalar> build_contact(std::size_t sites, const std::vector<std::vector<Scalar>>& lambda,
                                      const std::vector<Scalar>& delta) {
  detail::check_square(lambda, sites, "build_contact");
  detail::check_vector(delta, sites, "build_contact");
  const auto sp = site_space(sites, 2);
  BasicMappingRep<Scalar> rep(sp.poset);
  for (std::size_t i = 0; i < sites; ++i)
    for (std::size_t j = 0; j < sites; ++j)
      if (i != j && detail::at_or_zero(lambda, i, j) > Scalar(0)) rep.add(branching_map(sp, i, j), lambda[i][j]);
  for (std::size_t i = 0; i < sites; ++i)
    if (detail::at_or_zero(delta, i) > Scalar(0)) rep.add(coop_d(sp, i), delta[i]);
  return rep;
}

/// The contact process as a spin system: beta_j(x) = sum_i lambda_ij x(i),
/// delta_j(x) = delta_j.
template <class Scalar = double>
SpinRates<Scalar> contact_spin_rates(std::size_t sites, const std::vector<std::vector<Scalar>>& lambda,
                                     const std::vector<Scalar>& delta) {
  detail::check_square(lambda, sites, "contact_spin_rates");
  detail::check_vector(delta, sites, "contact_spin_rates");
  const std::size_t n = std::size_t{1} << sites;
  SpinRates<Scalar> r;
  r.beta.assign(sites, std::vector<Scalar>(n, Scalar(0)));
  r.delta.assign(sites, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t j = 0; j < sites; ++j)
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t i = 0; i < sites; ++i)
        if (i != j && (x >> i & 1u)) r.beta[j][x] += detail::at_or_zero(lambda, i, j);
      r.delta[j][x] = detail::at_or_zero(delta, j);
    }
  return r;
}

// ---------------------------------------------------------------------------
// Monotone kernels on a chain.

template <class Scalar>
struct KernelMap {
  Scalar probability;
  PosetMap map;
};

/// Quantile coupling with one shared uniform U: m_U(x) = min{y : F_x(y) >= U}
/// with F_x(y) = sum_{z <= y} K(x,z). The maps are constant for U between
/// consecutive distinct partial sums, so one map per such interval (equal maps
/// merged, first occurrence kept). Throws NotMonotone if K is not monotone.
template <class Scalar>
std::vector<KernelMap<Scalar>> represent_monotone_kernel_chain(const Matrix<Scalar>& k) {
  const std::size_t n = k.rows();
  if (k.cols() != n || n == 0) throw std::invalid_argument("represent_monotone_kernel_chain: K must be square and nonempty");
  const auto chain = share(Poset::chain(n));
  const bool monotone = check_kernel_monotone(k, *chain);
  std::vector<std::vector<Scalar>> cdf(n, std::vector<Scalar>(n));
  std::vector<Scalar> cuts;
  for (std::size_t x = 0; x < n; ++x) {
    Scalar acc(0);
    for (std::size_t y = 0; y < n; ++y) {
      acc += k(x, y);
      cdf[x][y] = acc;
      if (acc > Scalar(0) && acc < Scalar(1)) cuts.push_back(acc);
    }
  }
  cuts.push_back(Scalar(1));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<KernelMap<Scalar>> out;
  Scalar prev(0);
  for (const auto& u : cuts) {
    // On (prev, u] the quantile is the least y with F_x(y) >= u.
    std::vector<std::size_t> img(n);
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t y = 0;
      while (y + 1 < n && cdf[x][y] < u) ++y;
      img[x] = y;
    }
    const Scalar p = u - prev;
    prev = u;
    auto it = std::find_if(out.begin(), out.end(), [&](const KernelMap<Scalar>& km) { return km.map.img() == img; });
    if (it != out.end()) it->probability += p;
    else out.push_back({p, PosetMap(chain, std::move(img), "q" + std::to_string(out.size()))});
  }
  if (!monotone) {
    for (const auto& km : out) {
      const auto c = is_monotone(km.map);
      if (!c.holds)
        throw NotMonotone("represent_monotone_kernel_chain: K is not monotone; quantile map " + km.map.name() + " fails",
                          c.witness->first, c.witness->second);
    }
    throw NotMonotone("represent_monotone_kernel_chain: K is not monotone", 0, 0);
  }
  return out;
}

/// K(x,y) = sum of p over maps with m(x) = y.
template <class Scalar>
Matrix<Scalar> mix_kernel(const std::vector<KernelMap<Scalar>>& maps, std::size_t n) {
  Matrix<Scalar> k(n, n);
  for (const auto& km : maps)
    for (std::size_t x = 0; x < n; ++x) k(x, km.map(x)) += km.probability;
  return k;
}

/// A Siegmund chain jumping at total rate `rate` according to a monotone kernel
/// with 0 as a trap: the quantile maps at rates rate * p.
template <class Scalar = double>
BasicMappingRep<Scalar> build_siegmund_from_kernel(const Matrix<Scalar>& k, Scalar rate) {
  if (k.rows() == 0) throw ModelError("build_siegmund_from_kernel: empty kernel");
  const auto maps = represent_monotone_kernel_chain(k);
  std::vector<std::vector<std::size_t>> tables;
  std::vector<Scalar> rates;
  std::vector<std::string> names;
  for (const auto& km : maps) {
    tables.push_back(km.map.img());
    rates.push_back(rate * km.probability);
    names.push_back(km.map.name());
  }
  return build_siegmund<Scalar>(k.rows() - 1, tables, rates, names);
}

// ---------------------------------------------------------------------------
// Named models.

/// A model description. `model` is one of voter, krone, coop, siegmund, spin,
/// custom; only the fields that model reads need to be filled.
struct ModelSpec {
  std::string model = "voter";
  std::string name;
  std::size_t sites = 2;  // |L|, or n for the chain {0..n}

  std::vector<std::vector<double>> pair_rates;  // voter r_ij, coop s_ij (c_ij), krone b_ij
  std::vector<std::vector<std::vector<double>>> triple_rates;  // coop r_ijk
  std::vector<std::vector<double>> voter_rates;                // coop a_ij
  std::vector<std::vector<double>> exclusion_rates;            // coop e_ij
  std::vector<double> a, c, d, e;                              // krone a_i, c_i, d_i, e_i; coop d_i uses d

  std::vector<std::vector<double>> beta, delta;  // spin tables [i][x]

  // siegmund and custom: explicit maps as image tables
  std::vector<std::vector<std::size_t>> maps;
  std::vector<double> rates;
  std::vector<std::string> map_names;

  // custom: the state space (covers) and optionally the prime bijection
  std::optional<Poset> poset;
  std::vector<std::size_t> prime;
};

struct Model {
  ModelSpec spec;
  RandomMappingRep rep;
  DualityPairing pairing;
  bool additive = false;
  bool monotone = false;
  /// For coop: the star dual of map k as a union of pointwise maps.
  std::vector<std::vector<PosetMap>> star_parts;
};

inline const std::vector<std::string>& model_kinds() {
  static const std::vector<std::string> kinds{"voter", "krone", "coop", "siegmund", "spin", "custom"};
  return kinds;
}

inline Model build_model(const ModelSpec& spec) {
  Model m{spec, RandomMappingRep(), DualityPairing(share(Poset())), false, false, {}};
  const auto& k = spec.model;
  if (k == "voter") {
    m.rep = build_voter<double>(spec.sites, spec.pair_rates);
    m.pairing = complement_site_pairing(site_space(spec.sites, 2));
  } else if (k == "krone") {
    KroneRates<double> r{spec.a, spec.c, spec.d, spec.e, spec.pair_rates};
    m.rep = build_krone<double>(spec.sites, r);
    m.pairing = krone_pairing(site_space(spec.sites, 3));
  } else if (k == "coop") {
    CoopRates<double> r{spec.triple_rates, spec.pair_rates, spec.voter_rates, spec.d, spec.exclusion_rates};
    const auto sp = site_space(spec.sites, 2);
    m.rep = RandomMappingRep(sp.poset);
    for (auto& [term, rate] : coop_terms(spec.sites, r)) {
      m.rep.add(term.map, rate);
      m.star_parts.push_back(term.star_parts);
    }
    m.pairing = complement_site_pairing(sp);
  } else if (k == "siegmund") {
    m.rep = build_siegmund<double>(spec.sites, spec.maps, spec.rates, spec.map_names);
    m.pairing = siegmund_pairing(m.rep.space());
  } else if (k == "spin") {
    m.rep = decompose_attractive_spin<double>(spec.sites, {spec.beta, spec.delta});
    m.pairing = complement_site_pairing(site_space(spec.sites, 2));
  } else if (k == "custom") {
    if (!spec.poset) throw ModelError("custom model: missing poset");
    const auto space = share(*spec.poset);
    if (spec.maps.size() != spec.rates.size()) throw ModelError("custom model: map and rate counts differ");
    m.rep = RandomMappingRep(space);
    for (std::size_t i = 0; i < spec.maps.size(); ++i) {
      if (spec.maps[i].size() != space->size()) throw ModelError("custom model: map " + std::to_string(i) + " has the wrong length");
      for (auto v : spec.maps[i])
        if (v >= space->size()) throw ModelError("custom model: map " + std::to_string(i) + " leaves the space");
      m.rep.add(PosetMap(space, spec.maps[i], i < spec.map_names.size() ? spec.map_names[i] : "m" + std::to_string(i)),
                spec.rates[i]);
    }
    m.pairing = spec.prime.empty() ? DualityPairing(space) : DualityPairing(space, spec.prime);
  } else {
    throw ModelError("unknown model kind '" + k + "'");
  }
  m.monotone = m.rep.all_monotone();
  m.additive = m.monotone && m.rep.all_additive();
  return m;
}

/// Built-in parameter sets, all with integer rates so exact arithmetic applies.
///   voter     r_ij = 1 for all i != j
///   krone     a = 2, b_ij = 1, c = 1, d = 1, e = 3
///   coop      r_ijk = 1, s_ij = 1, d_i = 1
///   siegmund  chain {0..sites}: x -> x-1 (rate 1), x -> x+1 off the trap (rate 2),
///             x -> 0 below 2 (rate 1)
///   spin      contact process, lambda_ij = 1, delta_i = 1, decomposed
inline ModelSpec builtin_spec(const std::string& kind, std::size_t sites) {
  ModelSpec s;
  s.model = kind;
  s.name = kind;
  s.sites = sites;
  auto square = [&](double v) {
    std::vector<std::vector<double>> r(sites, std::vector<double>(sites, v));
    for (std::size_t i = 0; i < sites; ++i) r[i][i] = 0;
    return r;
  };
  if (kind == "voter") {
    s.pair_rates = square(1);
  } else if (kind == "krone") {
    s.a.assign(sites, 2);
    s.pair_rates = square(1);
    s.c.assign(sites, 1);
    s.d.assign(sites, 1);
    s.e.assign(sites, 3);
  } else if (kind == "coop") {
    s.triple_rates.assign(sites, std::vector<std::vector<double>>(sites, std::vector<double>(sites, 0)));
    for (std::size_t i = 0; i < sites; ++i)
      for (std::size_t j = 0; j < sites; ++j)
        for (std::size_t k = 0; k < sites; ++k)
          if (i != j && j != k && i != k) s.triple_rates[i][j][k] = 1;
    s.pair_rates = square(1);
    s.d.assign(sites, 1);
  } else if (kind == "siegmund") {
    const std::size_t n = sites;
    std::vector<std::size_t> down(n + 1), up(n + 1), collapse(n + 1);
    for (std::size_t x = 0; x <= n; ++x) {
      down[x] = x == 0 ? 0 : x - 1;
      up[x] = x == 0 ? 0 : std::min(x + 1, n);
      collapse[x] = x < 2 ? 0 : x;
    }
    s.maps = {down, up, collapse};
    s.rates = {1, 2, 1};
    s.map_names = {"down", "up", "collapse"};
  } else if (kind == "spin") {
    const auto r = contact_spin_rates<double>(sites, square(1), std::vector<double>(sites, 1));
    s.beta = r.beta;
    s.delta = r.delta;
  } else {
    throw ModelError("no builtin model named '" + kind + "'");
  }
  return s;
}

inline std::vector<std::string> builtin_names() { return {"voter", "krone", "coop", "siegmund", "spin"}; }

}  // namespace orderdual
