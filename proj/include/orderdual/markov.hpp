#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orderdual/duality.hpp"
#include "orderdual/element_set.hpp"
#include "orderdual/errors.hpp"
#include "orderdual/maps.hpp"
#include "orderdual/matrix.hpp"
#include "orderdual/poset.hpp"

namespace orderdual {

/// A finite set of self-maps of one poset with nonnegative rates,
/// G f(x) = sum_m r_m (f(m(x)) - f(x)).
template <class Scalar>
class BasicMappingRep {
 public:
  BasicMappingRep() = default;
  explicit BasicMappingRep(PosetPtr space) : space_(std::move(space)) {}

  void add(PosetMap m, Scalar rate) {
    if (rate < Scalar(0)) throw std::invalid_argument("RandomMappingRep: negative rate for " + m.name());
    if (*m.domain() != *space_ || *m.codomain() != *space_)
      throw std::invalid_argument("RandomMappingRep: " + m.name() + " is not a self-map of the state space");
    maps_.push_back(std::move(m));
    rates_.push_back(rate);
  }

  const PosetPtr& space() const { return space_; }
  std::size_t size() const { return maps_.size(); }
  bool empty() const { return maps_.empty(); }
  const PosetMap& map(std::size_t k) const { return maps_[k]; }
  const Scalar& rate(std::size_t k) const { return rates_[k]; }
  const std::vector<PosetMap>& maps() const { return maps_; }
  const std::vector<Scalar>& rates() const { return rates_; }

  Scalar total_rate() const {
    Scalar t(0);
    for (const auto& r : rates_) t += r;
    return t;
  }

  bool all_monotone() const {
    return std::all_of(maps_.begin(), maps_.end(), [](const PosetMap& m) { return is_monotone(m).holds; });
  }
  bool all_additive() const {
    if (maps_.empty()) return true;
    const auto lat = analyze_lattice(space_);
    if (!lat.is_join_semilattice || !lat.bottom) return false;
    return std::all_of(maps_.begin(), maps_.end(), [&](const PosetMap& m) { return is_additive(m, lat, lat).holds; });
  }

  /// Same maps with rates converted (double -> Rational is exact or throws).
  template <class To>
  BasicMappingRep<To> cast() const {
    BasicMappingRep<To> out(space_);
    for (std::size_t k = 0; k < size(); ++k) {
      if constexpr (std::is_same_v<Scalar, double>) out.add(maps_[k], scalar_from_double<To>(rates_[k]));
      else out.add(maps_[k], static_cast<To>(to_double(rates_[k])));
    }
    return out;
  }

 private:
  PosetPtr space_ = share(Poset());
  std::vector<PosetMap> maps_;
  std::vector<Scalar> rates_;
};

using RandomMappingRep = BasicMappingRep<double>;
using ExactMappingRep = BasicMappingRep<Rational>;

// ---------------------------------------------------------------------------
// Generators.

/// Q(x,y) = sum of r_m over maps with m(x) = y != x; rows sum to zero.
template <class Scalar>
Matrix<Scalar> build_generator(const BasicMappingRep<Scalar>& rep) {
  const std::size_t n = rep.space()->size();
  Matrix<Scalar> q(n, n);
  for (std::size_t k = 0; k < rep.size(); ++k) {
    const auto& m = rep.map(k);
    for (std::size_t x = 0; x < n; ++x) {
      const auto y = m(x);
      if (y == x) continue;
      q(x, y) += rep.rate(k);
      q(x, x) -= rep.rate(k);
    }
  }
  return q;
}

/// Generator on an explicit list of states from per-map transition tables
/// (trans[k][i] = index of the image of state i under map k).
template <class Scalar>
Matrix<Scalar> build_generator(std::size_t states, const std::vector<std::vector<std::size_t>>& trans,
                               const std::vector<Scalar>& rates) {
  if (trans.size() != rates.size()) throw std::invalid_argument("build_generator: rate count mismatch");
  Matrix<Scalar> q(states, states);
  for (std::size_t k = 0; k < trans.size(); ++k)
    for (std::size_t i = 0; i < states; ++i) {
      const auto j = trans[k][i];
      if (j == i) continue;
      q(i, j) += rates[k];
      q(i, i) -= rates[k];
    }
  return q;
}

/// Nonnegative off-diagonal entries and zero row sums (within tol).
template <class Scalar>
bool is_generator(const Matrix<Scalar>& q, Scalar tol = Scalar(0)) {
  if (q.rows() != q.cols()) return false;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    Scalar sum(0);
    for (std::size_t j = 0; j < q.cols(); ++j) {
      if (i != j && q(i, j) < Scalar(0)) return false;
      sum += q(i, j);
    }
    if (detail::abs_value(sum) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Transition matrices by uniformization.

struct UniformizationInfo {
  double lambda = 0;
  std::size_t pieces = 0;
  std::size_t terms = 0;
  double tail_bound = 0;
};

/// P_t = e^{tQ}. With lambda = max |Q(x,x)| (1 if Q = 0) and P = I + Q/lambda,
/// t is split into `pieces` steps of length h with lambda*h <= 1, and on each
/// step e^{hQ} = sum_k w_k P^k with Poisson(lambda*h) weights w_k, truncated once
/// the tail bound w_{K+1} / (1 - lambda*h/(K+2)) drops below tol/(2*pieces).
/// Throws BudgetExceeded when this needs more than `max_terms` terms.
inline Matrix<double> transition_matrix(const Matrix<double>& q, double t, double tol = 1e-12,
                                        UniformizationInfo* info = nullptr, std::size_t max_terms = 10000) {
  if (t < 0) throw std::invalid_argument("transition_matrix: negative time");
  if (!(tol > 0)) throw std::invalid_argument("transition_matrix: tol must be positive");
  if (q.rows() != q.cols()) throw std::invalid_argument("transition_matrix: generator is not square");
  const std::size_t n = q.rows();
  double lambda = 0;
  for (std::size_t i = 0; i < n; ++i) lambda = std::max(lambda, std::fabs(q(i, i)));
  if (lambda == 0) lambda = 1;
  UniformizationInfo local;
  local.lambda = lambda;
  if (t == 0 || q.max_abs() == 0) {
    if (info) *info = local;
    return Matrix<double>::identity(n);
  }
  const double pieces_d = std::max(1.0, std::ceil(lambda * t));
  if (pieces_d > 1e7) throw BudgetExceeded("transition_matrix: lambda*t too large");
  const auto pieces = static_cast<std::size_t>(pieces_d);
  const double h = t / pieces_d;
  const double a = lambda * h;
  const double target = tol / (2.0 * pieces_d);

  auto p = q * (1.0 / lambda);
  for (std::size_t i = 0; i < n; ++i) p(i, i) += 1.0;

  auto power = Matrix<double>::identity(n);
  double w = std::exp(-a);
  auto step = power * w;
  std::size_t k = 0;
  double bound = 1;
  while (true) {
    const double next = w * a / static_cast<double>(k + 1);
    bound = next / (1.0 - a / static_cast<double>(k + 2));
    if (bound < target) break;
    if (k + 1 > max_terms) throw BudgetExceeded("transition_matrix: tolerance unreachable within the term cap");
    ++k;
    power = power * p;
    w = next;
    step += power * w;
  }
  local.pieces = pieces;
  local.terms = k + 1;
  local.tail_bound = bound * pieces_d;
  if (info) *info = local;

  // step^pieces by repeated squaring.
  auto result = Matrix<double>::identity(n);
  auto base = step;
  for (std::size_t e = pieces; e > 0; e >>= 1) {
    if (e & 1u) result = result * base;
    if (e > 1) base = base * base;
  }
  return result;
}

/// Rows sum to 1 and entries are >= -tol.
inline bool is_stochastic(const Matrix<double>& p, double tol) {
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < p.cols(); ++j) {
      if (p(i, j) < -tol) return false;
      sum += p(i, j);
    }
    if (std::fabs(sum - 1.0) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dual representations.

/// Same rates, every map replaced by its additive dual. Throws NotAdditive.
template <class Scalar>
BasicMappingRep<Scalar> dual_rep_additive(const DualityPairing& d, const BasicMappingRep<Scalar>& rep) {
  if (*rep.space() != *d.primal()) throw std::invalid_argument("dual_rep_additive: pairing is over a different space");
  BasicMappingRep<Scalar> out(d.dual());
  for (std::size_t k = 0; k < rep.size(); ++k) out.add(additive_dual(d, rep.map(k)), rep.rate(k));
  return out;
}

/// A set-valued dual chain restricted to the closure of some seed sets.
template <class Scalar>
struct MonotoneDualRep {
  DualVariant variant = DualVariant::star;
  std::vector<ElementSet> states;                    // sets over S', discovery order
  std::vector<std::vector<std::size_t>> transitions; // [map][state] -> state
  std::vector<Scalar> rates;
  Matrix<Scalar> generator;

  std::optional<std::size_t> index_of(const ElementSet& b) const {
    for (std::size_t k = 0; k < states.size(); ++k)
      if (states[k] == b) return k;
    return std::nullopt;
  }
};

inline constexpr std::size_t kDefaultClosureCap = 1u << 16;

/// Breadth-first closure of `seeds` under all dual maps of the chosen variant;
/// the generator H f(B) = sum r_m (f(m^(B)) - f(B)) is built on that closure.
template <class Scalar>
MonotoneDualRep<Scalar> dual_rep_monotone(const DualityPairing& d, const BasicMappingRep<Scalar>& rep,
                                          const std::vector<ElementSet>& seeds, DualVariant variant,
                                          std::size_t cap = kDefaultClosureCap) {
  if (variant == DualVariant::prime) throw std::invalid_argument("dual_rep_monotone: use dual_rep_additive for prime");
  std::vector<MonotoneDualMaps> duals;
  for (const auto& m : rep.maps()) duals.emplace_back(d, m);
  MonotoneDualRep<Scalar> out;
  out.variant = variant;
  out.rates = rep.rates();
  out.transitions.assign(rep.size(), {});
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index;
  std::deque<std::size_t> queue;
  auto intern = [&](const ElementSet& b) {
    auto it = index.find(b);
    if (it != index.end()) return it->second;
    if (out.states.size() >= cap) throw CapExceeded("dual_rep_monotone closure", out.states.size() + 1, cap);
    index.emplace(b, out.states.size());
    out.states.push_back(b);
    queue.push_back(out.states.size() - 1);
    return out.states.size() - 1;
  };
  for (const auto& s : seeds) {
    if (s.universe() != d.size()) throw std::invalid_argument("dual_rep_monotone: seed over the wrong space");
    intern(s);
  }
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < duals.size(); ++k) {
      const auto j = intern(apply_dual(duals[k], variant, out.states[i]));
      auto& row = out.transitions[k];
      if (row.size() <= i) row.resize(i + 1);
      row[i] = j;
    }
  }
  for (auto& row : out.transitions) row.resize(out.states.size());
  out.generator = build_generator<Scalar>(out.states.size(), out.transitions, out.rates);
  return out;
}

// ---------------------------------------------------------------------------
// Duality at the matrix level.

/// Psi(x, y) = f(x, y) as a matrix.
template <class Scalar, class F>
Matrix<Scalar> psi_matrix(std::size_t rows, std::size_t cols, F&& f) {
  Matrix<Scalar> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Scalar(f(i, j));
  return m;
}

template <class Scalar>
Matrix<Scalar> pairing_matrix(const DualityPairing& d) {
  return psi_matrix<Scalar>(d.size(), d.size(), [&](std::size_t x, std::size_t y) { return d.pairing_value(x, y); });
}

template <class Scalar>
struct IntertwiningReport {
  Scalar residual = Scalar(0);
  std::size_t row = 0;
  std::size_t col = 0;
  bool ok = true;
  Matrix<Scalar> residual_matrix;  // Q_X Psi - Psi Q_dual^T
};

namespace detail {

template <class Scalar>
IntertwiningReport<Scalar> residual_report(Matrix<Scalar> r, Scalar tol) {
  IntertwiningReport<Scalar> rep;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (abs_value(r(i, j)) > rep.residual) {
        rep.residual = abs_value(r(i, j));
        rep.row = i;
        rep.col = j;
      }
  rep.ok = rep.residual <= tol;
  rep.residual_matrix = std::move(r);
  return rep;
}

}  // namespace detail

/// max |Q_X Psi - Psi Q_dual^T|; passes iff the residual is <= tol (use tol = 0
/// with exact arithmetic).
template <class Scalar>
IntertwiningReport<Scalar> check_intertwining(const Matrix<Scalar>& qx, const Matrix<Scalar>& qd, const Matrix<Scalar>& psi,
                                              Scalar tol) {
  if (qx.rows() != psi.rows() || qd.rows() != psi.cols() || qx.rows() != qx.cols() || qd.rows() != qd.cols())
    throw std::invalid_argument("check_intertwining: shape mismatch");
  return detail::residual_report(qx * psi - psi * qd.transpose(), tol);
}

/// max |P_t Psi - Psi Phat_t^T| with both semigroups from uniformization at
/// tolerance `unif_tol`.
inline IntertwiningReport<double> semigroup_duality_check(const Matrix<double>& qx, const Matrix<double>& qd,
                                                          const Matrix<double>& psi, double t, double tol,
                                                          double unif_tol = 1e-12) {
  if (qx.rows() != psi.rows() || qd.rows() != psi.cols()) throw std::invalid_argument("semigroup_duality_check: shape mismatch");
  const auto px = transition_matrix(qx, t, unif_tol);
  const auto pd = transition_matrix(qd, t, unif_tol);
  return detail::residual_report(px * psi - psi * pd.transpose(), tol);
}

// ---------------------------------------------------------------------------
// Monotone kernels.

/// K is monotone iff K 1_A is monotone for every increasing A.
template <class Scalar>
bool check_kernel_monotone(const Matrix<Scalar>& k, const Poset& s, Scalar tol = Scalar(0)) {
  if (k.rows() != s.size() || k.cols() != s.size()) throw std::invalid_argument("check_kernel_monotone: shape mismatch");
  for (std::size_t i = 0; i < k.rows(); ++i) {
    Scalar sum(0);
    for (std::size_t j = 0; j < k.cols(); ++j) {
      if (k(i, j) < -tol) throw std::invalid_argument("check_kernel_monotone: negative entry");
      sum += k(i, j);
    }
    if (detail::abs_value(sum - Scalar(1)) > tol) throw std::invalid_argument("check_kernel_monotone: row does not sum to 1");
  }
  for (const auto& a : increasing_sets(s)) {
    std::vector<Scalar> kf(s.size(), Scalar(0));
    for (std::size_t x = 0; x < s.size(); ++x) a.for_each([&](std::size_t y) { kf[x] += k(x, y); });
    for (std::size_t x = 0; x < s.size(); ++x)
      for (std::size_t y = 0; y < s.size(); ++y)
        if (s.leq(x, y) && kf[x] > kf[y] + tol) return false;
  }
  return true;
}

}  // namespace orderdual
