#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orderdual/element_set.hpp"
#include "orderdual/errors.hpp"
#include "orderdual/maps.hpp"
#include "orderdual/poset.hpp"

namespace orderdual {

/// A poset S together with its dual S' and the pairing <x,y> = 1{x <= y'}.
///
/// Elements of S' are the indices of `view().poset()`; y' for y in S' is
/// `view().unprime(y)`, an element of S.
class DualityPairing {
 public:
  explicit DualityPairing(PosetPtr s) : view_(dual_view(std::move(s))) {}
  DualityPairing(PosetPtr s, std::vector<std::size_t> prime) : view_(dual_view(std::move(s), std::move(prime))) {}

  const PosetPtr& primal() const { return view_.base(); }
  const PosetPtr& dual() const { return view_.poset(); }
  const DualPosetView& view() const { return view_; }
  std::size_t size() const { return view_.size(); }

  /// <x,y> for x in S, y in S'.
  int pairing_value(std::size_t x, std::size_t y) const {
    check(x);
    check(y);
    return primal()->leq(x, view_.unprime(y)) ? 1 : 0;
  }

  /// phi(x,B) = 1{x <= y' for some y in B}.
  int phi_value(std::size_t x, const ElementSet& b) const {
    check(x);
    bool hit = false;
    b.for_each([&](std::size_t y) { hit = hit || primal()->leq(x, view_.unprime(y)); });
    return hit ? 1 : 0;
  }

  /// phi~(x,B) = 1{x >= y' for some y in B}.
  int phi_tilde_value(std::size_t x, const ElementSet& b) const {
    check(x);
    bool hit = false;
    b.for_each([&](std::size_t y) { hit = hit || primal()->geq(x, view_.unprime(y)); });
    return hit ? 1 : 0;
  }

  /// The |S| x |S'| table of <x,y>.
  std::vector<std::vector<int>> table() const {
    std::vector<std::vector<int>> t(size(), std::vector<int>(size()));
    for (std::size_t x = 0; x < size(); ++x)
      for (std::size_t y = 0; y < size(); ++y) t[x][y] = pairing_value(x, y);
    return t;
  }

  /// The same pairing seen from S': <y,x> = 1{y <= x'} for y in S', x in S.
  DualityPairing reversed() const { return DualityPairing(view_.poset(), view_.inverse_map()); }

 private:
  void check(std::size_t x) const {
    if (x >= size()) throw std::out_of_range("DualityPairing: index " + std::to_string(x) + " out of range");
  }
  DualPosetView view_;
};

// ---------------------------------------------------------------------------
// Additive duals.

/// The unique map m' on S' with m^{-1}({y'}v) = {m'(y)'}v for every y. Throws
/// NotAdditive at the first y for which the preimage is not a principal ideal,
/// which happens for some y iff m is not additive.
inline PosetMap additive_dual(const DualityPairing& d, const PosetMap& m) {
  if (*m.domain() != *d.primal() || *m.codomain() != *d.primal())
    throw std::invalid_argument("additive_dual: map is not a self-map of the pairing's space");
  const auto& s = *d.primal();
  const auto& v = d.view();
  std::vector<std::size_t> img(d.size());
  for (std::size_t y = 0; y < d.size(); ++y) {
    const auto pre = inverse_image(m, principal_down(s, v.unprime(y)));
    const auto top = maximal_elements(s, pre);
    if (top.count() != 1 || principal_down(s, top.members().front()) != pre)
      throw NotAdditive("additive_dual: preimage of {" + d.dual()->label(y) + "'}v under " +
                            (m.name().empty() ? std::string("map") : m.name()) + " is not a principal ideal",
                        y);
    img[y] = v.prime(top.members().front());
  }
  return PosetMap(d.dual(), std::move(img), m.name().empty() ? std::string{} : m.name() + "'");
}

// ---------------------------------------------------------------------------
// Monotone duals on P(S').

/// The four set-valued duals of a monotone self-map m of S:
///   m+(B)' = (m^{-1}(B'v))_max          dagger
///   m*(B)' = U_{x in B} (m^{-1}({x'}v))_max   star
///   mo(B)' = (m^{-1}(B'^))_min          circ
///   m.(B)' = U_{x in B} (m^{-1}({x'}^))_min   bullet
/// Sets B are ElementSets over S'.
class MonotoneDualMaps {
 public:
  MonotoneDualMaps(DualityPairing d, PosetMap m) : d_(std::move(d)), m_(std::move(m)) {
    if (*m_.domain() != *d_.primal() || *m_.codomain() != *d_.primal())
      throw std::invalid_argument("MonotoneDualMaps: map is not a self-map of the pairing's space");
    const auto check = is_monotone(m_);
    if (!check.holds)
      throw NotMonotone("MonotoneDualMaps: " + (m_.name().empty() ? std::string("map") : m_.name()) +
                            " is not monotone: " + check.detail,
                        check.witness->first, check.witness->second);
    const auto& s = *d_.primal();
    const auto& v = d_.view();
    for (std::size_t x = 0; x < d_.size(); ++x) {
      const auto xp = v.unprime(x);
      star_.push_back(v.prime(maximal_elements(s, inverse_image(m_, principal_down(s, xp)))));
      bullet_.push_back(v.prime(minimal_elements(s, inverse_image(m_, principal_up(s, xp)))));
    }
  }

  const PosetMap& map() const { return m_; }
  const DualityPairing& pairing() const { return d_; }

  ElementSet dagger(const ElementSet& b) const {
    const auto& s = *d_.primal();
    const auto& v = d_.view();
    return v.prime(maximal_elements(s, inverse_image(m_, down_set(s, v.unprime(b)))));
  }

  ElementSet star(const ElementSet& b) const {
    ElementSet out(d_.size());
    b.for_each([&](std::size_t x) { out |= star_[x]; });
    return out;
  }

  ElementSet circ(const ElementSet& b) const {
    const auto& s = *d_.primal();
    const auto& v = d_.view();
    return v.prime(minimal_elements(s, inverse_image(m_, up_set(s, v.unprime(b)))));
  }

  ElementSet bullet(const ElementSet& b) const {
    ElementSet out(d_.size());
    b.for_each([&](std::size_t x) { out |= bullet_[x]; });
    return out;
  }

 private:
  DualityPairing d_;
  PosetMap m_;
  std::vector<ElementSet> star_;
  std::vector<ElementSet> bullet_;
};

enum class DualVariant { prime, dagger, star, circ, bullet };

inline std::string to_string(DualVariant v) {
  switch (v) {
    case DualVariant::prime: return "prime";
    case DualVariant::dagger: return "dagger";
    case DualVariant::star: return "star";
    case DualVariant::circ: return "circ";
    case DualVariant::bullet: return "bullet";
  }
  return "?";
}

inline std::optional<DualVariant> parse_variant(const std::string& s) {
  for (auto v : {DualVariant::prime, DualVariant::dagger, DualVariant::star, DualVariant::circ, DualVariant::bullet})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

/// Applies the chosen set-valued dual.
inline ElementSet apply_dual(const MonotoneDualMaps& md, DualVariant v, const ElementSet& b) {
  switch (v) {
    case DualVariant::dagger: return md.dagger(b);
    case DualVariant::star: return md.star(b);
    case DualVariant::circ: return md.circ(b);
    case DualVariant::bullet: return md.bullet(b);
    case DualVariant::prime: break;
  }
  throw std::invalid_argument("apply_dual: prime is not a set-valued dual");
}

/// dagger and star are dual with respect to phi; circ and bullet with respect to phi~.
inline bool uses_phi_tilde(DualVariant v) { return v == DualVariant::circ || v == DualVariant::bullet; }

inline ElementSet dual_dagger(const DualityPairing& d, const PosetMap& m, const ElementSet& b) {
  return MonotoneDualMaps(d, m).dagger(b);
}
inline ElementSet dual_star(const DualityPairing& d, const PosetMap& m, const ElementSet& b) {
  return MonotoneDualMaps(d, m).star(b);
}
inline ElementSet dual_circ(const DualityPairing& d, const PosetMap& m, const ElementSet& b) {
  return MonotoneDualMaps(d, m).circ(b);
}
inline ElementSet dual_bullet(const DualityPairing& d, const PosetMap& m, const ElementSet& b) {
  return MonotoneDualMaps(d, m).bullet(b);
}

/// All antichains of a poset, sorted.
inline std::vector<ElementSet> antichains(const Poset& p, std::size_t cap = 1u << 22) {
  // Antichains are in bijection with decreasing sets via A -> A_max.
  std::vector<ElementSet> out;
  for (const auto& dset : decreasing_sets(p, cap)) out.push_back(maximal_elements(p, dset));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive verification of map duality.

enum class DualityMode { equal, subdual, superdual };

inline std::string to_string(DualityMode m) {
  switch (m) {
    case DualityMode::equal: return "equal";
    case DualityMode::subdual: return "subdual";
    case DualityMode::superdual: return "superdual";
  }
  return "?";
}

struct DualityCounterexample {
  std::size_t x = 0;
  std::size_t y = 0;
  double lhs = 0;  // psi(m(x), y)
  double rhs = 0;  // psi(x, mhat(y))
};

struct DualityReport {
  DualityMode mode = DualityMode::equal;
  bool ok = true;
  std::optional<DualityCounterexample> counterexample;
  std::size_t pairs_checked = 0;
};

/// Checks psi(m(x), y) (=, <=, >=) psi(x, mhat(y)) for all x < nx, y < ny and
/// reports the first failing pair in (x, y) lexicographic order.
template <class Psi, class M, class MHat>
DualityReport verify_map_duality(std::size_t nx, std::size_t ny, Psi&& psi, M&& m, MHat&& mhat,
                                 DualityMode mode = DualityMode::equal) {
  DualityReport r;
  r.mode = mode;
  for (std::size_t x = 0; x < nx; ++x) {
    const auto mx = m(x);
    for (std::size_t y = 0; y < ny; ++y) {
      ++r.pairs_checked;
      const auto lhs = psi(mx, y);
      const auto rhs = psi(x, mhat(y));
      const bool good = mode == DualityMode::equal ? lhs == rhs : mode == DualityMode::subdual ? lhs <= rhs : lhs >= rhs;
      if (!good) {
        r.ok = false;
        r.counterexample = DualityCounterexample{x, y, static_cast<double>(lhs), static_cast<double>(rhs)};
        return r;
      }
    }
  }
  return r;
}

/// Table form: psi[x][y], m and mhat as image tables.
inline DualityReport verify_map_duality(const std::vector<std::vector<int>>& psi, const std::vector<std::size_t>& m,
                                        const std::vector<std::size_t>& mhat, DualityMode mode = DualityMode::equal) {
  const std::size_t nx = psi.size();
  const std::size_t ny = nx == 0 ? mhat.size() : psi.front().size();
  for (const auto& row : psi)
    if (row.size() != ny) throw std::invalid_argument("verify_map_duality: ragged pairing table");
  if (m.size() != nx || mhat.size() != ny) throw std::invalid_argument("verify_map_duality: map does not match pairing shape");
  for (auto v : m)
    if (v >= nx) throw std::invalid_argument("verify_map_duality: map image out of range");
  for (auto v : mhat)
    if (v >= ny) throw std::invalid_argument("verify_map_duality: dual map image out of range");
  return verify_map_duality(
      nx, ny, [&](std::size_t x, std::size_t y) { return psi[x][y]; }, [&](std::size_t x) { return m[x]; },
      [&](std::size_t y) { return mhat[y]; }, mode);
}

/// (m, m') under <.,.>.
inline DualityReport verify_additive_pair(const DualityPairing& d, const PosetMap& m, const PosetMap& mp) {
  return verify_map_duality(
      d.size(), d.size(), [&](std::size_t x, std::size_t y) { return d.pairing_value(x, y); },
      [&](std::size_t x) { return m(x); }, [&](std::size_t y) { return mp(y); });
}

/// (m, variant) under phi or phi~ over the given list of dual sets.
inline DualityReport verify_monotone_pair(const MonotoneDualMaps& md, DualVariant v, const std::vector<ElementSet>& sets) {
  const auto& d = md.pairing();
  const bool tilde = uses_phi_tilde(v);
  auto phi = [&](std::size_t x, const ElementSet& b) { return tilde ? d.phi_tilde_value(x, b) : d.phi_value(x, b); };
  DualityReport r;
  for (std::size_t x = 0; x < d.size(); ++x)
    for (std::size_t k = 0; k < sets.size(); ++k) {
      ++r.pairs_checked;
      const int lhs = phi(md.map()(x), sets[k]);
      const int rhs = phi(x, apply_dual(md, v, sets[k]));
      if (lhs != rhs) {
        r.ok = false;
        r.counterexample = DualityCounterexample{x, k, static_cast<double>(lhs), static_cast<double>(rhs)};
        return r;
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Gray's dual.

struct TimedMap {
  PosetMap map;
  double time = 0;
};

namespace detail {

inline void check_timed_events(const std::vector<TimedMap>& events, double s, double u) {
  if (s > u) throw std::invalid_argument("gray: s > u");
  double last = s;
  for (const auto& e : events) {
    if (!(e.time > last) || e.time > u) throw std::invalid_argument("gray: event times must be strictly increasing in (s,u]");
    last = e.time;
  }
}

}  // namespace detail

/// zeta_{s,u}(y): start points of the minimal [s,u]-paths ending at y, found by
/// enumerating every path that is constant between event times.
///
/// A path takes value p_k on [t_k, t_{k+1}) (t_0 = s) and p_n = y; it satisfies
/// the flow condition iff m_l o ... o m_{k+1}(p_k) >= p_l for all k <= l.
inline ElementSet gray_zeta_oracle(const PosetPtr& space, const std::vector<TimedMap>& events, std::size_t y, double s,
                                   double u, std::size_t budget = 1u << 20) {
  detail::check_timed_events(events, s, u);
  const std::size_t n = events.size();
  const auto& p = *space;
  const std::size_t states = p.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    if (total > budget / states) throw BudgetExceeded("gray_zeta_oracle: |S|^(events+1) exceeds the enumeration budget");
    total *= states;
  }
  std::size_t candidates = 1;
  for (std::size_t k = 0; k < n; ++k) candidates *= states;

  std::vector<std::vector<std::size_t>> accepted;
  std::vector<std::size_t> path(n + 1);
  path[n] = y;
  for (std::size_t c = 0; c < candidates; ++c) {
    std::size_t rest = c;
    for (std::size_t k = 0; k < n; ++k) {
      path[k] = rest % states;
      rest /= states;
    }
    bool good = true;
    for (std::size_t k = 0; k <= n && good; ++k) {
      std::size_t cur = path[k];
      for (std::size_t l = k + 1; l <= n && good; ++l) {
        cur = events[l - 1].map(cur);
        good = p.geq(cur, path[l]);
      }
    }
    if (good) accepted.push_back(path);
  }
  ElementSet out(states);
  for (const auto& a : accepted) {
    bool minimal = true;
    for (const auto& b : accepted) {
      if (b == a) continue;
      bool below = true;
      for (std::size_t k = 0; k <= n && below; ++k) below = p.leq(b[k], a[k]);
      if (below) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.insert(a[0]);
  }
  return out;
}

/// Y._{-u,-s}({y}): the bullet duals applied to {y} in reverse time order, with
/// S' = S under the reversed order.
inline ElementSet gray_bullet_flow(const PosetPtr& space, const std::vector<TimedMap>& events, std::size_t y) {
  const DualityPairing d(space);
  ElementSet b(d.size());
  b.insert(y);
  for (std::size_t k = events.size(); k-- > 0;) b = MonotoneDualMaps(d, events[k].map).bullet(b);
  return b;
}

struct GrayMismatch {
  std::size_t y = 0;
  ElementSet oracle;
  ElementSet dual;
};

struct GrayCheck {
  bool ok = true;
  std::size_t states_checked = 0;
  std::optional<GrayMismatch> mismatch;
};

/// Compares the path oracle with the bullet flow for every endpoint y.
inline GrayCheck check_gray_equivalence(const PosetPtr& space, const std::vector<TimedMap>& events, double s, double u,
                                        std::size_t budget = 1u << 20) {
  GrayCheck r;
  for (std::size_t y = 0; y < space->size(); ++y) {
    ++r.states_checked;
    const auto oracle = gray_zeta_oracle(space, events, y, s, u, budget);
    const auto dual = gray_bullet_flow(space, events, y);
    if (oracle != dual) {
      r.ok = false;
      r.mismatch = GrayMismatch{y, oracle, dual};
      return r;
    }
  }
  return r;
}

}  // namespace orderdual
