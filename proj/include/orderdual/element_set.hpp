#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace orderdual {

/// A subset of the elements {0, ..., n-1} of some finite ground set, stored as a
/// packed bit mask.
///
/// The ordering operators compare sets as the binary numbers whose bit k is the
/// membership of element k. On a ground set of k <= 64 points this makes the
/// sorted order of all subsets coincide with 0, 1, ..., 2^k - 1, which is the
/// state indexing used for product spaces {0,1}^k.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}

  ElementSet(std::size_t universe, std::initializer_list<std::size_t> members) : ElementSet(universe) {
    for (auto x : members) insert(x);
  }

  static ElementSet full(std::size_t universe) {
    ElementSet s(universe);
    for (std::size_t x = 0; x < universe; ++x) s.insert(x);
    return s;
  }

  static ElementSet from_indices(std::size_t universe, const std::vector<std::size_t>& members) {
    ElementSet s(universe);
    for (auto x : members) s.insert(x);
    return s;
  }

  /// Bit k of `mask` is membership of element k; requires universe <= 64.
  static ElementSet from_mask(std::size_t universe, std::uint64_t mask) {
    if (universe > 64) throw std::invalid_argument("ElementSet::from_mask: universe exceeds 64");
    ElementSet s(universe);
    if (universe > 0) {
      const std::uint64_t keep = universe == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << universe) - 1);
      s.words_[0] = mask & keep;
    }
    return s;
  }

  std::uint64_t to_mask() const {
    if (n_ > 64) throw std::logic_error("ElementSet::to_mask: universe exceeds 64");
    return words_.empty() ? 0 : words_[0];
  }

  std::size_t universe() const { return n_; }

  bool contains(std::size_t x) const { return x < n_ && ((words_[x / 64] >> (x % 64)) & 1u) != 0; }

  void insert(std::size_t x) {
    check_index(x);
    words_[x / 64] |= std::uint64_t{1} << (x % 64);
  }

  void erase(std::size_t x) {
    check_index(x);
    words_[x / 64] &= ~(std::uint64_t{1} << (x % 64));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t x) { out.push_back(x); });
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const auto b = static_cast<std::size_t>(std::countr_zero(bits));
        f(w * 64 + b);
        bits &= bits - 1;
      }
    }
  }

  bool subset_of(const ElementSet& other) const {
    check_same(other);
    for (std::size_t w = 0; w < words_.size(); ++w)
      if ((words_[w] & ~other.words_[w]) != 0) return false;
    return true;
  }

  bool intersects(const ElementSet& other) const {
    check_same(other);
    for (std::size_t w = 0; w < words_.size(); ++w)
      if ((words_[w] & other.words_[w]) != 0) return true;
    return false;
  }

  ElementSet complement() const {
    ElementSet c(n_);
    for (std::size_t w = 0; w < words_.size(); ++w) c.words_[w] = ~words_[w];
    c.trim();
    return c;
  }

  ElementSet& operator|=(const ElementSet& o) {
    check_same(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  ElementSet& operator&=(const ElementSet& o) {
    check_same(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  ElementSet& operator-=(const ElementSet& o) {
    check_same(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }

  friend bool operator==(const ElementSet& a, const ElementSet& b) = default;

  friend std::strong_ordering operator<=>(const ElementSet& a, const ElementSet& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    for (std::size_t w = a.words_.size(); w-- > 0;)
      if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(n_);
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  /// "{0,3,5}"
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each([&](std::size_t x) {
      if (!first) s += ',';
      s += std::to_string(x);
      first = false;
    });
    return s + "}";
  }

 private:
  void check_index(std::size_t x) const {
    if (x >= n_) throw std::out_of_range("ElementSet: index " + std::to_string(x) + " outside universe " + std::to_string(n_));
  }
  void check_same(const ElementSet& o) const {
    if (o.n_ != n_) throw std::invalid_argument("ElementSet: universe mismatch");
  }
  void trim() {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

}  // namespace orderdual
