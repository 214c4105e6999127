#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orderdual/element_set.hpp"
#include "orderdual/errors.hpp"
#include "orderdual/lattice.hpp"
#include "orderdual/poset.hpp"

namespace orderdual {

/// A total map between finite posets, stored as its image table.
class PosetMap {
 public:
  PosetMap() = default;
  PosetMap(PosetPtr domain, PosetPtr codomain, std::vector<std::size_t> img, std::string name = {})
      : domain_(std::move(domain)), codomain_(std::move(codomain)), img_(std::move(img)), name_(std::move(name)) {
    if (img_.size() != domain_->size()) throw std::invalid_argument("PosetMap '" + name_ + "': image table has wrong length");
    for (auto y : img_)
      if (y >= codomain_->size()) throw std::invalid_argument("PosetMap '" + name_ + "': image outside codomain");
  }
  /// Self-map.
  PosetMap(PosetPtr space, std::vector<std::size_t> img, std::string name = {})
      : PosetMap(space, space, std::move(img), std::move(name)) {}

  static PosetMap identity(PosetPtr space, std::string name = "id") {
    std::vector<std::size_t> img(space->size());
    for (std::size_t x = 0; x < img.size(); ++x) img[x] = x;
    return PosetMap(std::move(space), std::move(img), std::move(name));
  }

  template <class F>
  static PosetMap from_function(PosetPtr space, F&& f, std::string name = {}) {
    std::vector<std::size_t> img(space->size());
    for (std::size_t x = 0; x < img.size(); ++x) img[x] = f(x);
    return PosetMap(std::move(space), std::move(img), std::move(name));
  }

  std::size_t operator()(std::size_t x) const { return img_[x]; }

  const PosetPtr& domain() const { return domain_; }
  const PosetPtr& codomain() const { return codomain_; }
  const std::vector<std::size_t>& img() const { return img_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return img_.size(); }

  PosetMap renamed(std::string name) const { return PosetMap(domain_, codomain_, img_, std::move(name)); }

  /// Pointwise image of a set of domain elements.
  ElementSet image(const ElementSet& a) const {
    ElementSet out(codomain_->size());
    a.for_each([&](std::size_t x) { out.insert(img_[x]); });
    return out;
  }

  /// Equal image tables over equal posets; names are ignored.
  friend bool operator==(const PosetMap& a, const PosetMap& b) {
    return a.img_ == b.img_ && *a.domain_ == *b.domain_ && *a.codomain_ == *b.codomain_;
  }

 private:
  PosetPtr domain_;
  PosetPtr codomain_;
  std::vector<std::size_t> img_;
  std::string name_;
};

/// m^{-1}(A) = {x : m(x) in A}.
inline ElementSet inverse_image(const PosetMap& m, const ElementSet& a) {
  if (a.universe() != m.codomain()->size()) throw std::invalid_argument("inverse_image: set is not over the codomain");
  ElementSet out(m.size());
  for (std::size_t x = 0; x < m.size(); ++x)
    if (a.contains(m(x))) out.insert(x);
  return out;
}

/// (m2 o m1)(x) = m2(m1(x)).
inline PosetMap compose(const PosetMap& m2, const PosetMap& m1) {
  if (*m1.codomain() != *m2.domain()) throw std::invalid_argument("compose: codomain of m1 differs from domain of m2");
  std::vector<std::size_t> img(m1.size());
  for (std::size_t x = 0; x < img.size(); ++x) img[x] = m2(m1(x));
  std::string name = m2.name().empty() || m1.name().empty() ? std::string{} : m2.name() + "." + m1.name();
  return PosetMap(m1.domain(), m2.codomain(), std::move(img), std::move(name));
}

/// Maximum codomain size for which the decreasing-set / ideal characterization is
/// enumerated as a cross-check.
inline constexpr std::size_t kCrossCheckCap = 20;

struct MapCheck {
  bool holds = false;
  /// Lexicographically first violating pair (x, y).
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  /// Whether the inverse-image characterization was also evaluated.
  bool cross_checked = false;
  std::string detail;
};

namespace detail {

inline bool preimages_of_decreasing_are_decreasing(const PosetMap& m) {
  for (const auto& a : decreasing_sets(*m.codomain()))
    if (!is_decreasing(*m.domain(), inverse_image(m, a))) return false;
  return true;
}

inline bool preimages_of_ideals_are_ideals(const PosetMap& m) {
  const auto& cod = *m.codomain();
  // In a finite join-semilattice every ideal is principal.
  for (std::size_t z = 0; z < cod.size(); ++z) {
    const auto pre = inverse_image(m, principal_down(cod, z));
    if (!classify_subset(*m.domain(), pre).ideal) return false;
  }
  return true;
}

}  // namespace detail

/// Exhaustive check of x <= y => m(x) <= m(y).
inline MapCheck is_monotone(const PosetMap& m) {
  MapCheck r;
  r.holds = true;
  const auto& dom = *m.domain();
  const auto& cod = *m.codomain();
  for (std::size_t x = 0; x < dom.size() && r.holds; ++x)
    for (std::size_t y = 0; y < dom.size(); ++y)
      if (dom.leq(x, y) && !cod.leq(m(x), m(y))) {
        r.holds = false;
        r.witness = std::make_pair(x, y);
        r.detail = "x<=y but m(x)=" + cod.label(m(x)) + " not <= m(y)=" + cod.label(m(y));
        break;
      }
  if (cod.size() <= kCrossCheckCap) {
    r.cross_checked = true;
    if (detail::preimages_of_decreasing_are_decreasing(m) != r.holds)
      throw std::logic_error("is_monotone: inverse-image characterization disagrees");
  }
  return r;
}

/// Exhaustive check of m(0) = 0 and m(x v y) = m(x) v m(y). Domain and codomain
/// must be join-semilattices bounded below.
inline MapCheck is_additive(const PosetMap& m, const LatticeInfo& dom, const LatticeInfo& cod) {
  if (!dom.is_join_semilattice || !dom.bottom || !cod.is_join_semilattice || !cod.bottom)
    throw std::invalid_argument("is_additive: domain and codomain must be join-semilattices bounded below");
  MapCheck r;
  r.holds = true;
  const std::size_t n = m.size();
  if (m(*dom.bottom) != *cod.bottom) {
    r.holds = false;
    r.witness = std::make_pair(*dom.bottom, *dom.bottom);
    r.detail = "m(0) != 0";
  }
  for (std::size_t x = 0; x < n && r.holds; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (m(dom.join(x, y)) != cod.join(m(x), m(y))) {
        r.holds = false;
        r.witness = std::make_pair(x, y);
        r.detail = "m(x v y) != m(x) v m(y)";
        break;
      }
  if (cod.size() <= kCrossCheckCap) {
    r.cross_checked = true;
    if (detail::preimages_of_ideals_are_ideals(m) != r.holds)
      throw std::logic_error("is_additive: ideal characterization disagrees");
  }
  return r;
}

inline MapCheck is_additive(const PosetMap& m) {
  const auto dom = analyze_lattice(m.domain());
  if (m.domain() == m.codomain() || *m.domain() == *m.codomain()) return is_additive(m, dom, dom);
  return is_additive(m, dom, analyze_lattice(m.codomain()));
}

}  // namespace orderdual
