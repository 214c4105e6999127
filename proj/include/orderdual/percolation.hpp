#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orderdual/duality.hpp"
#include "orderdual/element_set.hpp"
#include "orderdual/errors.hpp"
#include "orderdual/lattice.hpp"
#include "orderdual/maps.hpp"
#include "orderdual/poset.hpp"

namespace orderdual {

/// P_dec(ground) as a state space: the family (indexed in numeric mask order)
/// and its inclusion poset, shared by every map over it.
struct DecSpace {
  PosetPtr ground;
  SetFamily family;
  PosetPtr poset;

  std::size_t size() const { return family.size(); }
  std::size_t index(const ElementSet& x) const { return family.at(x); }
  const ElementSet& set(std::size_t k) const { return family[k]; }
};

inline DecSpace make_dec_space(PosetPtr ground) {
  DecSpace d;
  d.ground = ground;
  d.family = decreasing_family(std::move(ground));
  d.poset = share(d.family.inclusion_poset());
  return d;
}

/// The pairing <x,y> = 1{x n y = empty} between P_dec(L) and P_dec(L') = P_inc(L),
/// realized with x' = complement.
inline DualityPairing complement_pairing(const DecSpace& primal, const DecSpace& dual) {
  if (primal.ground->size() != dual.ground->size() || *primal.ground != dual.ground->reversed())
    throw std::invalid_argument("complement_pairing: dual ground must be the reversed primal ground");
  std::vector<std::size_t> prime(primal.size());
  for (std::size_t k = 0; k < primal.size(); ++k) prime[k] = dual.index(primal.set(k).complement());
  return DualityPairing(primal.poset, std::move(prime));
}

// ---------------------------------------------------------------------------
// M-sets.

/// A subset M of L x L; pair (i,j) reads "i feeds j".
class MSet {
 public:
  MSet() = default;
  explicit MSet(PosetPtr ground) : ground_(std::move(ground)), pairs_(ground_->size() * ground_->size()) {}
  MSet(PosetPtr ground, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) : MSet(std::move(ground)) {
    for (auto [i, j] : pairs) insert(i, j);
  }

  static MSet diagonal(PosetPtr ground) {
    MSet m(std::move(ground));
    for (std::size_t i = 0; i < m.sites(); ++i) m.insert(i, i);
    return m;
  }

  const PosetPtr& ground() const { return ground_; }
  std::size_t sites() const { return ground_->size(); }
  bool contains(std::size_t i, std::size_t j) const { return pairs_.contains(i * sites() + j); }
  void insert(std::size_t i, std::size_t j) {
    if (i >= sites() || j >= sites()) throw std::out_of_range("MSet: site out of range");
    pairs_.insert(i * sites() + j);
  }
  void erase(std::size_t i, std::size_t j) { pairs_.erase(i * sites() + j); }

  /// Pairs in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    pairs_.for_each([&](std::size_t k) { out.emplace_back(k / sites(), k % sites()); });
    return out;
  }

  /// m(x) = {j : (i,j) in M for some i in x}.
  ElementSet apply(const ElementSet& x) const {
    ElementSet out(sites());
    x.for_each([&](std::size_t i) {
      for (std::size_t j = 0; j < sites(); ++j)
        if (contains(i, j)) out.insert(j);
    });
    return out;
  }

  /// {i : (i,j) in M for some j in y}.
  ElementSet apply_backward(const ElementSet& y) const {
    ElementSet out(sites());
    y.for_each([&](std::size_t j) {
      for (std::size_t i = 0; i < sites(); ++i)
        if (contains(i, j)) out.insert(i);
    });
    return out;
  }

  friend bool operator==(const MSet& a, const MSet& b) { return a.pairs_ == b.pairs_ && *a.ground_ == *b.ground_; }

 private:
  PosetPtr ground_ = share(Poset(0));
  ElementSet pairs_{0};
};

struct MPropViolation {
  /// (i,j) in M together with the missing pair it forces.
  std::pair<std::size_t, std::size_t> present;
  std::pair<std::size_t, std::size_t> missing;
};

/// (i,j) in M, i <= i~ => (i~,j) in M; (i,j) in M, j >= j~ => (i,j~) in M.
inline std::optional<MPropViolation> check_mprop(const MSet& m) {
  const auto& g = *m.ground();
  for (auto [i, j] : m.pairs())
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.leq(i, k) && !m.contains(k, j)) return MPropViolation{{i, j}, {k, j}};
      if (g.leq(k, j) && !m.contains(i, k)) return MPropViolation{{i, j}, {i, k}};
    }
  return std::nullopt;
}

/// M = {(i,j) : j in m({i}v)} for an additive self-map of P_dec(L).
inline MSet map_to_mset(const DecSpace& dec, const PosetMap& m) {
  if (*m.domain() != *dec.poset || *m.codomain() != *dec.poset)
    throw std::invalid_argument("map_to_mset: map is not over P_dec of the ground");
  const auto check = is_additive(m);
  if (!check.holds) throw NotAdditive("map_to_mset: " + m.name() + " is not additive: " + check.detail, check.witness->first);
  const auto& g = *dec.ground;
  MSet out(dec.ground);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& img = dec.set(m(dec.index(principal_down(g, i))));
    img.for_each([&](std::size_t j) { out.insert(i, j); });
  }
  return out;
}

/// m(x) = {j : (i,j) in M, i in x} as a self-map of P_dec(L).
inline PosetMap mset_to_map(const DecSpace& dec, const MSet& m, std::string name = {}) {
  if (*m.ground() != *dec.ground) throw std::invalid_argument("mset_to_map: M is over a different ground");
  if (auto v = check_mprop(m))
    throw std::invalid_argument("mset_to_map: (" + std::to_string(v->present.first) + "," + std::to_string(v->present.second) +
                                ") in M forces (" + std::to_string(v->missing.first) + "," +
                                std::to_string(v->missing.second) + ")");
  std::vector<std::size_t> img(dec.size());
  for (std::size_t k = 0; k < dec.size(); ++k) img[k] = dec.index(m.apply(dec.set(k)));
  return PosetMap(dec.poset, std::move(img), std::move(name));
}

/// M' = {(j,i) : (i,j) in M} over the reversed ground.
inline MSet transpose_mset(const MSet& m) {
  MSet out(share(m.ground()->reversed()));
  for (auto [i, j] : m.pairs()) out.insert(j, i);
  return out;
}

// ---------------------------------------------------------------------------
// Diagrams.

struct DiagramEvent {
  double t = 0;
  MSet m;
  std::string name;
};

struct Arrow {
  std::size_t from = 0;
  std::size_t to = 0;
  double t = 0;
};

struct Block {
  std::size_t site = 0;
  double t = 0;
};

/// A space-time picture over the sites of `ground` on [s,u]. When `pair_sites`
/// is nonzero the ground is L x {0,1} with site (i,k) at index i + k*pair_sites,
/// and the two lines of each i are drawn next to each other.
struct Diagram {
  PosetPtr ground;
  double s = 0;
  double u = 0;
  std::vector<DiagramEvent> events;
  std::size_t pair_sites = 0;
  std::vector<std::string> site_labels;

  std::size_t sites() const { return ground->size(); }

  std::vector<Arrow> arrows() const {
    std::vector<Arrow> out;
    for (const auto& e : events)
      for (auto [i, j] : e.m.pairs())
        if (i != j) out.push_back({i, j, e.t});
    return out;
  }

  /// Arrows worth drawing: (i,j) is left out when j < i in the ground and
  /// neither endpoint is blocked, since decreasing sets already carry it.
  std::vector<Arrow> drawn_arrows() const {
    std::vector<Arrow> out;
    for (const auto& e : events)
      for (auto [i, j] : e.m.pairs())
        if (i != j && !implied(e.m, i, j)) out.push_back({i, j, e.t});
    return out;
  }

  bool implied(const MSet& m, std::size_t i, std::size_t j) const {
    return ground->less(j, i) && m.contains(i, i) && m.contains(j, j);
  }

  std::vector<Block> blocks() const {
    std::vector<Block> out;
    for (const auto& e : events)
      for (std::size_t i = 0; i < sites(); ++i)
        if (!e.m.contains(i, i)) out.push_back({i, e.t});
    return out;
  }

  /// The dual picture: time reversed, every M transposed.
  Diagram dual() const {
    Diagram d{share(ground->reversed()), -u, -s, {}, pair_sites, site_labels};
    for (auto it = events.rbegin(); it != events.rend(); ++it) d.events.push_back({-it->t, transpose_mset(it->m), it->name});
    return d;
  }
};

inline void validate_diagram(const Diagram& d) {
  if (d.s > d.u) throw std::invalid_argument("Diagram: s > u");
  double last = d.s;
  for (const auto& e : d.events) {
    if (!(e.t > last) || e.t > d.u) throw std::invalid_argument("Diagram: event times must increase strictly within (s,u]");
    if (*e.m.ground() != *d.ground) throw std::invalid_argument("Diagram: event over a different ground");
    last = e.t;
  }
}

enum class Direction { forward, backward };

/// Forward: {j : (i,s) ~> (j,u) for some i in x}, using events in (s,u].
/// Backward: {i : (i,s) ~> (j,u) for some j in x}, using events in [s,u), latest first.
inline ElementSet reach(const Diagram& d, const ElementSet& x, double s, double u, Direction dir) {
  if (s > u || s < d.s || u > d.u) throw std::out_of_range("reach: interval outside the diagram horizon");
  if (x.universe() != d.sites()) throw std::invalid_argument("reach: set over the wrong ground");
  ElementSet cur = x;
  if (dir == Direction::forward) {
    for (const auto& e : d.events)
      if (e.t > s && e.t <= u) cur = e.m.apply(cur);
  } else {
    for (auto it = d.events.rbegin(); it != d.events.rend(); ++it)
      if (it->t >= s && it->t < u) cur = it->m.apply_backward(cur);
  }
  return cur;
}

struct GraphicalDualityReport {
  bool ok = true;
  int no_path = 0;  // 1{no open path from x x {s} to y x {u}}
  std::vector<double> times;
  std::vector<int> lhs;  // 1{X_{s,t-}(x) n Y_{-u,-t}(y) = empty}
  std::optional<double> first_violation;
};

/// Compares 1{X_{s,t-}(x) n Y_{-u,-t}(y) = empty} with 1{no open path x -> y} at
/// t = s, every event time in (s,u), and t = u.
inline GraphicalDualityReport check_graphical_duality(const Diagram& d, const ElementSet& x, const ElementSet& y, double s,
                                                      double u) {
  GraphicalDualityReport r;
  r.no_path = reach(d, x, s, u, Direction::forward).intersects(y) ? 0 : 1;
  std::vector<double> ts{s};
  for (const auto& e : d.events)
    if (e.t > s && e.t < u) ts.push_back(e.t);
  ts.push_back(u);
  for (double t : ts) {
    // X_{s,t-}: events in (s,t); Y_{-u,-t}: events in [t,u).
    ElementSet fx = x;
    for (const auto& e : d.events)
      if (e.t > s && e.t < t) fx = e.m.apply(fx);
    const auto by = reach(d, y, t, u, Direction::backward);
    const int v = fx.intersects(by) ? 0 : 1;
    r.times.push_back(t);
    r.lhs.push_back(v);
    if (v != r.no_path && !r.first_violation) {
      r.ok = false;
      r.first_violation = t;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// SVG.

struct SvgOptions {
  double site_spacing = 60;
  double pair_gap = 18;
  double time_scale = 80;
  double margin = 40;
  double panel_gap = 80;
  bool dual_panel = true;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Two panels: the forward picture with time running upward, and next to it the
/// dual picture (arrows reversed) with dual time -t running upward. With
/// `highlight` = (x, y), the space-time points lying on an open path from x at
/// time s to y at time u are drawn thick in both panels.
inline std::string render_svg(const Diagram& d, const std::optional<std::pair<ElementSet, ElementSet>>& highlight = std::nullopt,
                              const SvgOptions& opt = {}) {
  validate_diagram(d);
  const std::size_t n = d.sites();
  const std::size_t groups = d.pair_sites ? d.pair_sites : n;
  auto site_x = [&](std::size_t i) {
    if (!d.pair_sites) return opt.margin + static_cast<double>(i) * opt.site_spacing;
    const std::size_t base = i % d.pair_sites, level = i / d.pair_sites;
    return opt.margin + static_cast<double>(base) * opt.site_spacing + static_cast<double>(level) * opt.pair_gap;
  };
  const double span = d.u - d.s;
  const double panel_w = opt.margin + static_cast<double>(groups == 0 ? 0 : groups - 1) * opt.site_spacing +
                         (d.pair_sites ? opt.pair_gap : 0) + opt.margin;
  const double height = 2 * opt.margin + span * opt.time_scale;
  const int panels = opt.dual_panel ? 2 : 1;
  const double width = panels * panel_w + (panels - 1) * opt.panel_gap;
  const double bottom = height - opt.margin;

  // Highlighted pieces: forward reachable set and backward co-reachable set
  // between consecutive events.
  std::vector<ElementSet> fwd, bwd;
  if (highlight) {
    const std::size_t k = d.events.size();
    fwd.assign(k + 1, highlight->first);
    for (std::size_t e = 0; e < k; ++e) fwd[e + 1] = d.events[e].m.apply(fwd[e]);
    bwd.assign(k + 1, highlight->second);
    for (std::size_t e = k; e-- > 0;) bwd[e] = d.events[e].m.apply_backward(bwd[e + 1]);
  }

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::fmt(width) << "\" height=\""
     << detail::fmt(height) << "\" viewBox=\"0 0 " << detail::fmt(width) << " " << detail::fmt(height) << "\">\n";
  os << "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">"
        "<path d=\"M0,0 L8,4 L0,8 z\" fill=\"black\"/></marker></defs>\n";
  os << "<style>.site{stroke:#444;stroke-width:1}.arrow{stroke:black;stroke-width:1.2;marker-end:url(#head)}"
        ".block{stroke:black;stroke-width:4}.open{stroke:#c0392b;stroke-width:4;opacity:0.7}"
        "text{font-family:sans-serif;font-size:11px}</style>\n";

  for (int panel = 0; panel < panels; ++panel) {
    const bool dual = panel == 1;
    const double x0 = panel * (panel_w + opt.panel_gap);
    // Forward: y grows downward in SVG, so time t sits at bottom - (t-s)*scale.
    // Dual: dual time -t runs upward, i.e. original time t at top + (t-s)*scale.
    auto y_of = [&](double t) { return dual ? opt.margin + (t - d.s) * opt.time_scale : bottom - (t - d.s) * opt.time_scale; };
    os << "<g id=\"" << (dual ? "dual" : "forward") << "\">\n";
    os << "<text x=\"" << detail::fmt(x0 + opt.margin) << "\" y=\"" << detail::fmt(opt.margin / 2) << "\">"
       << (dual ? "dual" : "forward") << "</text>\n";
    for (std::size_t i = 0; i < n; ++i) {
      const double x = x0 + site_x(i);
      os << "<line class=\"site\" x1=\"" << detail::fmt(x) << "\" y1=\"" << detail::fmt(opt.margin) << "\" x2=\""
         << detail::fmt(x) << "\" y2=\"" << detail::fmt(bottom) << "\"/>\n";
      const std::string label = i < d.site_labels.size() ? d.site_labels[i] : std::to_string(i);
      os << "<text x=\"" << detail::fmt(x - 3) << "\" y=\"" << detail::fmt(height - opt.margin / 3) << "\">"
         << detail::xml_escape(label) << "</text>\n";
    }
    if (highlight) {
      std::vector<double> cuts{d.s};
      for (const auto& e : d.events) cuts.push_back(e.t);
      cuts.push_back(d.u);
      for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const auto on = fwd[seg] & bwd[seg];
        on.for_each([&](std::size_t i) {
          const double x = x0 + site_x(i);
          os << "<line class=\"open\" x1=\"" << detail::fmt(x) << "\" y1=\"" << detail::fmt(y_of(cuts[seg])) << "\" x2=\""
             << detail::fmt(x) << "\" y2=\"" << detail::fmt(y_of(cuts[seg + 1])) << "\"/>\n";
        });
      }
      for (std::size_t e = 0; e < d.events.size(); ++e)
        for (auto [i, j] : d.events[e].m.pairs())
          if (i != j && !d.implied(d.events[e].m, i, j) && fwd[e].contains(i) && bwd[e + 1].contains(j)) {
            const double y = y_of(d.events[e].t);
            os << "<line class=\"open\" x1=\"" << detail::fmt(x0 + site_x(i)) << "\" y1=\"" << detail::fmt(y) << "\" x2=\""
               << detail::fmt(x0 + site_x(j)) << "\" y2=\"" << detail::fmt(y) << "\"/>\n";
          }
    }
    for (const auto& e : d.events) {
      const double y = y_of(e.t);
      for (auto [i, j] : e.m.pairs()) {
        if (i == j || d.implied(e.m, i, j)) continue;
        // The dual panel draws the transposed M-set: arrows reversed.
        const auto from = dual ? j : i, to = dual ? i : j;
        os << "<line class=\"arrow\" x1=\"" << detail::fmt(x0 + site_x(from)) << "\" y1=\"" << detail::fmt(y) << "\" x2=\""
           << detail::fmt(x0 + site_x(to)) << "\" y2=\"" << detail::fmt(y) << "\"/>\n";
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (e.m.contains(i, i)) continue;
        const double x = x0 + site_x(i);
        os << "<line class=\"block\" x1=\"" << detail::fmt(x - 7) << "\" y1=\"" << detail::fmt(y) << "\" x2=\""
           << detail::fmt(x + 7) << "\" y2=\"" << detail::fmt(y) << "\"/>\n";
      }
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace orderdual
