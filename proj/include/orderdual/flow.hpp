#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "orderdual/markov.hpp"
#include "orderdual/matrix.hpp"
#include "orderdual/rng.hpp"

namespace orderdual {

struct Event {
  std::size_t map = 0;  // index into the driving RandomMappingRep
  double time = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// A Poisson realization on the horizon [s,u]: strictly increasing event times,
/// all in (s,u).
struct EventLog {
  double s = 0;
  double u = 0;
  std::vector<Event> events;
  std::uint64_t seed = 0;

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

enum class Side { left, right };

inline void validate_log(const EventLog& log) {
  if (log.s > log.u) throw std::invalid_argument("EventLog: s > u");
  double last = log.s;
  for (const auto& e : log.events) {
    if (!(e.time > last) || !(e.time <= log.u)) throw std::invalid_argument("EventLog: times must increase strictly within (s,u]");
    last = e.time;
  }
}

/// Draws, in this order from SplitMix64(seed): the event count
/// N ~ Poisson(R (u-s)) with R the total rate; N times u - U (u-s) (redrawing
/// any that hit u or repeat an earlier time), then sorted; and for each event in
/// time order a map index chosen with probability proportional to its rate.
template <class Scalar>
EventLog sample_event_log(const std::vector<Scalar>& rates, double s, double u, std::uint64_t seed) {
  if (s > u) throw std::invalid_argument("sample_event_log: s > u");
  EventLog log{s, u, {}, seed};
  std::vector<double> cum;
  double total = 0;
  for (const auto& r : rates) {
    total += to_double(r);
    cum.push_back(total);
  }
  if (total <= 0 || s == u) return log;
  SplitMix64 rng(seed);
  const auto count = rng.poisson(total * (u - s));
  std::vector<double> times;
  times.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    double t;
    do {
      t = u - rng.uniform() * (u - s);
    } while (t >= u || t <= s || std::find(times.begin(), times.end(), t) != times.end());
    times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  for (double t : times) {
    const double pick = rng.uniform() * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), pick);
    auto k = static_cast<std::size_t>(it - cum.begin());
    if (k >= cum.size()) k = cum.size() - 1;
    while (to_double(rates[k]) <= 0) --k;  // never selects a zero-rate map
    log.events.push_back({k, t});
  }
  return log;
}

template <class Scalar>
EventLog sample_event_log(const BasicMappingRep<Scalar>& rep, double s, double u, std::uint64_t seed) {
  return sample_event_log(rep.rates(), s, u, seed);
}

/// Applies, in time order, apply(map index, state) for every event in (s,t]
/// (right) or (s,t) (left).
template <class State, class Apply>
State flow_apply(const EventLog& log, double s, double t, State x, Side side, Apply&& apply) {
  if (s > t || s < log.s || t > log.u) throw std::out_of_range("flow: interval outside the log horizon");
  for (const auto& e : log.events) {
    if (e.time <= s) continue;
    if (side == Side::right ? e.time > t : e.time >= t) break;
    x = apply(e.map, std::move(x));
  }
  return x;
}

/// X_{s,t}(x) (right) or X_{s,t-}(x) (left).
template <class Scalar>
std::size_t flow_eval(const EventLog& log, const BasicMappingRep<Scalar>& rep, double s, double t, std::size_t x,
                      Side side = Side::right) {
  return flow_apply(log, s, t, x, side, [&](std::size_t k, std::size_t y) { return rep.map(k)(y); });
}

/// The reversed log {(m^, -t)}: horizon [-u,-s], same map indices (which then
/// refer to the dual representation), times negated and re-sorted.
inline EventLog dual_event_log(const EventLog& log) {
  EventLog d{-log.u, -log.s, {}, log.seed};
  for (auto it = log.events.rbegin(); it != log.events.rend(); ++it) d.events.push_back({it->map, -it->time});
  return d;
}

// ---------------------------------------------------------------------------
// Pathwise duality.

struct PathwiseReport {
  bool ok = true;
  /// psi(X_{s,t-}(x), Y_{-u,-t}(y)) at t = s, each event time, and u.
  std::vector<double> times;
  std::vector<int> values;
  std::optional<double> first_violation;
  /// psi(x, Y_{-u,-s}(y)) and psi(X_{s,u}(x), y).
  int dual_end = 0;
  int forward_end = 0;
};

/// Evaluates psi(X_{s,t-}(x), Y_{-u,-t}(y)) along the log, where X is driven by
/// `forward` and Y by `backward` applied to the same events in reverse order.
template <class XState, class YState, class Forward, class Backward, class Psi>
  requires std::invocable<Forward&, std::size_t, const XState&> && std::invocable<Backward&, std::size_t, const YState&>
PathwiseReport check_pathwise_constancy(const EventLog& log, Forward&& forward, Backward&& backward, Psi&& psi,
                                        const XState& x, const YState& y) {
  const double s = log.s, u = log.u;
  const auto& ev = log.events;
  const std::size_t n = ev.size();
  validate_log(log);
  if (n > 0 && ev.back().time >= u) throw std::invalid_argument("check_pathwise_constancy: event at the horizon u");
  // ys[k] = Y_{-u,-t_k}(y): events k..n-1, latest first.
  std::vector<YState> ys(n + 1, y);
  for (std::size_t k = n; k-- > 0;) ys[k] = backward(ev[k].map, ys[k + 1]);
  PathwiseReport r;
  XState cur = x;
  for (std::size_t k = 0; k <= n; ++k) {
    // At t = t_k the left limit X_{s,t_k-} has seen events 0..k-1.
    const int v = psi(cur, ys[k]);
    r.times.push_back(k == 0 ? s : ev[k - 1].time);
    r.values.push_back(v);
    if (k > 0 && v != r.values.front() && !r.first_violation) {
      r.ok = false;
      r.first_violation = ev[k - 1].time;
    }
    if (k < n) cur = forward(ev[k].map, cur);
  }
  // Endpoint at u (no events at u, so the left limit equals X_{s,u}).
  r.times.push_back(u);
  r.values.push_back(psi(cur, y));
  if (r.values.back() != r.values.front() && !r.first_violation) {
    r.ok = false;
    r.first_violation = u;
  }
  r.dual_end = psi(x, ys[0]);
  r.forward_end = psi(cur, y);
  if (r.dual_end != r.forward_end) r.ok = false;
  return r;
}

/// Point-valued dual flows, e.g. (rep, dual_rep_additive(rep)) under <.,.>.
template <class Scalar, class Psi>
PathwiseReport check_pathwise_constancy(const EventLog& log, const BasicMappingRep<Scalar>& rep,
                                        const BasicMappingRep<Scalar>& dual, Psi&& psi, std::size_t x, std::size_t y) {
  return check_pathwise_constancy<std::size_t, std::size_t>(
      log, [&](std::size_t k, std::size_t z) { return rep.map(k)(z); },
      [&](std::size_t k, std::size_t z) { return dual.map(k)(z); }, psi, x, y);
}

// ---------------------------------------------------------------------------
// Monte Carlo.

struct MonteCarloResult {
  double mean_lhs = 0;  // E psi(X_t(x0), y0)
  double mean_rhs = 0;  // E psi(x0, Y_t(y0))
  double stderr_pooled = 0;
  std::size_t replicas = 0;
  double mean_events_lhs = 0;
  double mean_events_rhs = 0;
};

/// Replica r draws from SplitMix64 seeded with seed + r: first a log for the
/// forward chain on [0,t], then (continuing the same stream) a log for the dual
/// chain. The pooled standard error is sqrt((var_lhs + var_rhs) / 2) / sqrt(N).
template <class ForwardRates, class DualRates, class Forward, class Backward, class Psi>
MonteCarloResult monte_carlo_duality(const ForwardRates& fwd_rates, const DualRates& dual_rates, Forward&& forward,
                                     Backward&& backward, Psi&& psi, std::size_t x0, std::size_t y0, double t,
                                     std::size_t replicas, std::uint64_t seed, unsigned jobs = 1) {
  if (replicas == 0) throw std::invalid_argument("monte_carlo_duality: need at least one replica");
  std::vector<int> lhs(replicas), rhs(replicas);
  std::vector<std::size_t> nl(replicas), nr(replicas);
  auto run = [&](std::size_t r) {
    SplitMix64 seeder(seed + r);
    const auto l1 = sample_event_log(fwd_rates, 0.0, t, seeder.next());
    const auto l2 = sample_event_log(dual_rates, 0.0, t, seeder.next());
    std::size_t x = x0, y = y0;
    for (const auto& e : l1.events) x = forward(e.map, x);
    for (const auto& e : l2.events) y = backward(e.map, y);
    lhs[r] = psi(x, y0);
    rhs[r] = psi(x0, y);
    nl[r] = l1.events.size();
    nr[r] = l2.events.size();
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    for (std::size_t r = 0; r < replicas; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (std::size_t r = j; r < replicas; r += jobs) run(r);
      });
    for (auto& th : pool) th.join();
  }
  MonteCarloResult res;
  res.replicas = replicas;
  double sl = 0, sr = 0, el = 0, er = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    sl += lhs[r];
    sr += rhs[r];
    el += static_cast<double>(nl[r]);
    er += static_cast<double>(nr[r]);
  }
  const double n = static_cast<double>(replicas);
  res.mean_lhs = sl / n;
  res.mean_rhs = sr / n;
  res.mean_events_lhs = el / n;
  res.mean_events_rhs = er / n;
  if (replicas > 1) {
    double vl = 0, vr = 0;
    for (std::size_t r = 0; r < replicas; ++r) {
      vl += (lhs[r] - res.mean_lhs) * (lhs[r] - res.mean_lhs);
      vr += (rhs[r] - res.mean_rhs) * (rhs[r] - res.mean_rhs);
    }
    vl /= n - 1;
    vr /= n - 1;
    res.stderr_pooled = std::sqrt((vl + vr) / 2.0) / std::sqrt(n);
  }
  return res;
}

}  // namespace orderdual
