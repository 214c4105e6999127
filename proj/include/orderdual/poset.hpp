#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orderdual/element_set.hpp"
#include "orderdual/errors.hpp"

namespace orderdual {

inline constexpr std::size_t kDefaultElementCap = 4096;

/// Dense boolean relation, rel[x][y] meaning "x <= y".
using Relation = std::vector<std::vector<bool>>;

/// The first partial-order axiom a relation violates, with a witness.
struct OrderViolation {
  enum class Axiom { reflexivity, antisymmetry, transitivity, shape };
  Axiom axiom;
  std::vector<std::size_t> witness;  // (x) | (x, y) | (x, y, z)

  std::string describe() const {
    std::string w;
    for (std::size_t i = 0; i < witness.size(); ++i) w += (i ? "," : "") + std::to_string(witness[i]);
    switch (axiom) {
      case Axiom::reflexivity: return "reflexivity violated at (" + w + ")";
      case Axiom::antisymmetry: return "antisymmetry violated at (" + w + ")";
      case Axiom::transitivity: return "transitivity violated at (" + w + ")";
      case Axiom::shape: return "relation is not square";
    }
    return "unknown violation";
  }
};

/// Checks reflexivity, antisymmetry and transitivity in that order and reports the
/// lexicographically first witness of the first violated axiom.
inline std::optional<OrderViolation> validate_order(const Relation& rel) {
  const std::size_t n = rel.size();
  for (const auto& row : rel)
    if (row.size() != n) return OrderViolation{OrderViolation::Axiom::shape, {}};
  for (std::size_t x = 0; x < n; ++x)
    if (!rel[x][x]) return OrderViolation{OrderViolation::Axiom::reflexivity, {x}};
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (rel[x][y] && rel[y][x]) return OrderViolation{OrderViolation::Axiom::antisymmetry, {x, y}};
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (!rel[x][y]) continue;
      for (std::size_t z = 0; z < n; ++z)
        if (rel[y][z] && !rel[x][z]) return OrderViolation{OrderViolation::Axiom::transitivity, {x, y, z}};
    }
  return std::nullopt;
}

/// A finite partially ordered set on the elements 0..n-1 with the full order
/// matrix materialized. Immutable after construction.
class Poset {
 public:
  /// The one-element poset.
  Poset() : Poset(1) {}

  /// The antichain on n elements.
  explicit Poset(std::size_t n, std::size_t cap = kDefaultElementCap) : n_(n), leq_(n * n, 0) {
    if (n > cap) throw CapExceeded("Poset", n, cap);
    for (std::size_t x = 0; x < n; ++x) leq_[x * n + x] = 1;
  }

  /// Throws InvalidPoset when `rel` is not a partial order.
  static Poset from_relation(const Relation& rel, std::vector<std::string> labels = {},
                             std::size_t cap = kDefaultElementCap) {
    if (auto v = validate_order(rel)) throw InvalidPoset(v->describe());
    Poset p(rel.size(), cap);
    for (std::size_t x = 0; x < p.n_; ++x)
      for (std::size_t y = 0; y < p.n_; ++y) p.leq_[x * p.n_ + y] = rel[x][y] ? 1 : 0;
    p.set_labels(std::move(labels));
    return p;
  }

  /// Builds the order generated by `covers` (pairs (x, y) with x below y) by
  /// reflexive-transitive closure. Cycles are reported as InvalidPoset.
  static Poset from_covers(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& covers,
                           std::vector<std::string> labels = {}, std::size_t cap = kDefaultElementCap) {
    Poset p(n, cap);
    for (auto [x, y] : covers) {
      if (x >= n || y >= n) throw InvalidPoset("cover pair out of range");
      p.leq_[x * n + y] = 1;
    }
    // Warshall closure.
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        if (!p.leq_[i * n + k]) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (p.leq_[k * n + j]) p.leq_[i * n + j] = 1;
      }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (p.leq_[x * n + y] && p.leq_[y * n + x])
          throw InvalidPoset("covers contain a cycle through " + std::to_string(x) + " and " + std::to_string(y));
    p.set_labels(std::move(labels));
    return p;
  }

  static Poset chain(std::size_t n) {
    Poset p(n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y) p.leq_[x * n + y] = 1;
    return p;
  }

  static Poset antichain(std::size_t n) { return Poset(n); }

  std::size_t size() const { return n_; }
  bool leq(std::size_t x, std::size_t y) const { return leq_[x * n_ + y] != 0; }
  bool geq(std::size_t x, std::size_t y) const { return leq(y, x); }
  bool less(std::size_t x, std::size_t y) const { return x != y && leq(x, y); }
  bool comparable(std::size_t x, std::size_t y) const { return leq(x, y) || leq(y, x); }

  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(std::size_t x) const { return labels_.empty() ? std::to_string(x) : labels_[x]; }

  /// Same elements, reversed order.
  Poset reversed() const {
    Poset r(n_, n_);
    for (std::size_t x = 0; x < n_; ++x)
      for (std::size_t y = 0; y < n_; ++y) r.leq_[x * n_ + y] = leq_[y * n_ + x];
    r.labels_ = labels_;
    return r;
  }

  /// Covering pairs (x, y): x < y with nothing strictly between.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < n_; ++x)
      for (std::size_t y = 0; y < n_; ++y) {
        if (!less(x, y)) continue;
        bool cover = true;
        for (std::size_t z = 0; z < n_ && cover; ++z)
          if (less(x, z) && less(z, y)) cover = false;
        if (cover) out.emplace_back(x, y);
      }
    return out;
  }

  /// A linear extension: every element appears after everything below it.
  std::vector<std::size_t> linear_extension() const {
    std::vector<std::size_t> below(n_, 0), order(n_);
    for (std::size_t x = 0; x < n_; ++x)
      for (std::size_t y = 0; y < n_; ++y)
        if (less(y, x)) ++below[x];
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return below[a] < below[b]; });
    return order;
  }

  /// Same order; labels are ignored.
  friend bool operator==(const Poset& a, const Poset& b) { return a.n_ == b.n_ && a.leq_ == b.leq_; }

 private:
  void set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_) throw InvalidPoset("label count does not match element count");
    labels_ = std::move(labels);
  }

  std::size_t n_ = 0;
  std::vector<std::uint8_t> leq_;
  std::vector<std::string> labels_;
};

using PosetPtr = std::shared_ptr<const Poset>;

inline PosetPtr share(Poset p) { return std::make_shared<const Poset>(std::move(p)); }

// ---------------------------------------------------------------------------
// Up-sets, down-sets and extremal elements.

inline ElementSet up_set(const Poset& p, const ElementSet& a) {
  ElementSet out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    bool hit = false;
    a.for_each([&](std::size_t y) { hit = hit || p.leq(y, x); });
    if (hit) out.insert(x);
  }
  return out;
}

inline ElementSet down_set(const Poset& p, const ElementSet& a) {
  ElementSet out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    bool hit = false;
    a.for_each([&](std::size_t y) { hit = hit || p.leq(x, y); });
    if (hit) out.insert(x);
  }
  return out;
}

inline ElementSet principal_up(const Poset& p, std::size_t z) {
  ElementSet out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.leq(z, x)) out.insert(x);
  return out;
}

inline ElementSet principal_down(const Poset& p, std::size_t z) {
  ElementSet out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.leq(x, z)) out.insert(x);
  return out;
}

inline ElementSet maximal_elements(const Poset& p, const ElementSet& a) {
  ElementSet out(p.size());
  a.for_each([&](std::size_t x) {
    bool dominated = false;
    a.for_each([&](std::size_t y) { dominated = dominated || p.less(x, y); });
    if (!dominated) out.insert(x);
  });
  return out;
}

inline ElementSet minimal_elements(const Poset& p, const ElementSet& a) {
  ElementSet out(p.size());
  a.for_each([&](std::size_t x) {
    bool dominated = false;
    a.for_each([&](std::size_t y) { dominated = dominated || p.less(y, x); });
    if (!dominated) out.insert(x);
  });
  return out;
}

inline bool is_increasing(const Poset& p, const ElementSet& a) { return up_set(p, a) == a; }
inline bool is_decreasing(const Poset& p, const ElementSet& a) { return down_set(p, a) == a; }

inline bool is_antichain(const Poset& p, const ElementSet& a) { return maximal_elements(p, a) == a; }

struct SubsetClass {
  bool increasing = false;
  bool decreasing = false;
  bool filter = false;
  bool ideal = false;
  bool principal_filter = false;
  bool principal_ideal = false;
  std::optional<std::size_t> generator_up;    // z with A = {z}^, when principal_filter
  std::optional<std::size_t> generator_down;  // z with A = {z}v, when principal_ideal
};

/// Evaluates the six order-theoretic flags of a subset directly from their
/// definitions (filters and ideals are nonempty by definition).
inline SubsetClass classify_subset(const Poset& p, const ElementSet& a) {
  SubsetClass c;
  c.increasing = is_increasing(p, a);
  c.decreasing = is_decreasing(p, a);
  const auto members = a.members();
  auto directed = [&](bool upward) {
    for (auto x : members)
      for (auto y : members) {
        bool found = false;
        for (auto z : members) {
          if (upward ? (p.leq(x, z) && p.leq(y, z)) : (p.leq(z, x) && p.leq(z, y))) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
    return true;
  };
  c.filter = !a.empty() && c.increasing && directed(false);
  c.ideal = !a.empty() && c.decreasing && directed(true);
  for (auto z : members) {
    if (!c.principal_ideal && principal_down(p, z) == a) {
      c.principal_ideal = true;
      c.generator_down = z;
    }
    if (!c.principal_filter && principal_up(p, z) == a) {
      c.principal_filter = true;
      c.generator_up = z;
    }
  }
  return c;
}

/// All decreasing subsets, sorted by ElementSet order (numeric mask order).
inline std::vector<ElementSet> decreasing_sets(const Poset& p, std::size_t cap = 1u << 22) {
  const auto order = p.linear_extension();
  std::vector<ElementSet> out;
  ElementSet cur(p.size());
  // Walk elements in linear-extension order; an element may join only if
  // everything strictly below it is already in.
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == order.size()) {
      if (out.size() >= cap) throw CapExceeded("decreasing_sets", out.size() + 1, cap);
      out.push_back(cur);
      return;
    }
    const auto x = order[k];
    self(self, k + 1);
    bool ok = true;
    for (std::size_t y = 0; y < p.size() && ok; ++y)
      if (p.less(y, x) && !cur.contains(y)) ok = false;
    if (ok) {
      cur.insert(x);
      self(self, k + 1);
      cur.erase(x);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<ElementSet> increasing_sets(const Poset& p, std::size_t cap = 1u << 22) {
  return decreasing_sets(p.reversed(), cap);
}

// ---------------------------------------------------------------------------
// Dual posets.

/// S' realized on the indices 0..n-1: element x of S corresponds to prime[x] in
/// S', and x <= y in S iff prime[x] >= prime[y] in S'.
class DualPosetView {
 public:
  DualPosetView(PosetPtr base, std::vector<std::size_t> prime) : base_(std::move(base)), prime_(std::move(prime)) {
    const std::size_t n = base_->size();
    if (prime_.size() != n) throw std::invalid_argument("dual_view: prime has wrong length");
    inverse_.assign(n, n);
    for (std::size_t x = 0; x < n; ++x) {
      if (prime_[x] >= n || inverse_[prime_[x]] != n)
        throw std::invalid_argument("dual_view: prime is not a bijection");
      inverse_[prime_[x]] = x;
    }
    Relation rel(n, std::vector<bool>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) rel[a][b] = base_->leq(inverse_[b], inverse_[a]);
    std::vector<std::string> labels;
    if (!base_->labels().empty())
      for (std::size_t a = 0; a < n; ++a) labels.push_back(base_->label(inverse_[a]) + "'");
    poset_ = share(Poset::from_relation(rel, std::move(labels), n));
  }

  const PosetPtr& base() const { return base_; }
  const PosetPtr& poset() const { return poset_; }
  std::size_t size() const { return prime_.size(); }

  /// x -> x' (S to S').
  std::size_t prime(std::size_t x) const { return prime_[x]; }
  /// y -> y' (S' to S'' = S).
  std::size_t unprime(std::size_t y) const { return inverse_[y]; }
  const std::vector<std::size_t>& prime_map() const { return prime_; }
  const std::vector<std::size_t>& inverse_map() const { return inverse_; }

  ElementSet prime(const ElementSet& a) const {
    ElementSet out(size());
    a.for_each([&](std::size_t x) { out.insert(prime_[x]); });
    return out;
  }
  ElementSet unprime(const ElementSet& b) const {
    ElementSet out(size());
    b.for_each([&](std::size_t y) { out.insert(inverse_[y]); });
    return out;
  }

  /// The dual of the dual: S' with prime^{-1}, whose order equals the base order.
  DualPosetView dual() const { return DualPosetView(poset_, inverse_); }

 private:
  PosetPtr base_;
  std::vector<std::size_t> prime_;
  std::vector<std::size_t> inverse_;
  PosetPtr poset_;
};

inline DualPosetView dual_view(PosetPtr p, std::vector<std::size_t> prime) { return DualPosetView(std::move(p), std::move(prime)); }

inline DualPosetView dual_view(PosetPtr p) {
  std::vector<std::size_t> id(p->size());
  std::iota(id.begin(), id.end(), std::size_t{0});
  return DualPosetView(std::move(p), std::move(id));
}

// ---------------------------------------------------------------------------
// Products.

/// Mixed-radix little-endian coordinates: factor 0 varies fastest.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<std::size_t> radices) : radices_(std::move(radices)) {}

  std::size_t total() const {
    std::size_t t = 1;
    for (auto r : radices_) t *= r;
    return t;
  }
  std::size_t factors() const { return radices_.size(); }
  const std::vector<std::size_t>& radices() const { return radices_; }

  std::vector<std::size_t> decode(std::size_t index) const {
    std::vector<std::size_t> c(radices_.size());
    for (std::size_t k = 0; k < radices_.size(); ++k) {
      c[k] = index % radices_[k];
      index /= radices_[k];
    }
    return c;
  }
  std::size_t encode(const std::vector<std::size_t>& coords) const {
    std::size_t index = 0;
    for (std::size_t k = radices_.size(); k-- > 0;) index = index * radices_[k] + coords[k];
    return index;
  }
  std::size_t digit(std::size_t index, std::size_t k) const {
    for (std::size_t j = 0; j < k; ++j) index /= radices_[j];
    return index % radices_[k];
  }

 private:
  std::vector<std::size_t> radices_;
};

/// Coordinatewise product order. Element index is mixed-radix over the factors
/// with factor 0 varying fastest. Labels are the coordinate strings, factor 0 first.
inline Poset product_poset(const std::vector<Poset>& factors, std::size_t cap = kDefaultElementCap) {
  std::vector<std::size_t> radices;
  std::size_t total = 1;
  for (const auto& f : factors) {
    radices.push_back(f.size());
    total *= f.size();
    if (total > cap) throw CapExceeded("product_poset", total, cap);
  }
  const MixedRadix mr(radices);
  Relation rel(total, std::vector<bool>(total));
  std::vector<std::vector<std::size_t>> coords(total);
  for (std::size_t x = 0; x < total; ++x) coords[x] = mr.decode(x);
  for (std::size_t x = 0; x < total; ++x)
    for (std::size_t y = 0; y < total; ++y) {
      bool le = true;
      for (std::size_t k = 0; k < factors.size() && le; ++k) le = factors[k].leq(coords[x][k], coords[y][k]);
      rel[x][y] = le;
    }
  std::vector<std::string> labels;
  if (!factors.empty()) {
    for (std::size_t x = 0; x < total; ++x) {
      std::string s;
      for (std::size_t k = 0; k < factors.size(); ++k) s += factors[k].label(coords[x][k]);
      labels.push_back(std::move(s));
    }
  }
  return Poset::from_relation(rel, std::move(labels), cap);
}

/// {0, ..., levels-1}^sites with the product order; state labels are digit words,
/// site 0 first.
inline Poset grid_poset(std::size_t sites, std::size_t levels, std::size_t cap = kDefaultElementCap) {
  return product_poset(std::vector<Poset>(sites, Poset::chain(levels)), cap);
}

}  // namespace orderdual
