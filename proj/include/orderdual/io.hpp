#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orderdual/duality.hpp"
#include "orderdual/errors.hpp"
#include "orderdual/flow.hpp"
#include "orderdual/lattice.hpp"
#include "orderdual/maps.hpp"
#include "orderdual/matrix.hpp"
#include "orderdual/models.hpp"
#include "orderdual/percolation.hpp"
#include "orderdual/poset.hpp"

namespace orderdual {

using Json = nlohmann::ordered_json;

/// Malformed input. `where` is a JSON pointer or "byte N".
class ParseError : public OrderError {
 public:
  ParseError(const std::string& where, const std::string& msg) : OrderError(where + ": " + msg), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

namespace detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw ParseError(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(at, "missing field '" + key + "'");
  return *it;
}

template <class T>
T get_as(const Json& j, const std::string& at) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(at, e.what());
  }
}

template <class T>
T get_field(const Json& j, const std::string& key, const std::string& at) {
  return get_as<T>(field(j, key, at), at + "/" + key);
}

template <class T>
T get_field_or(const Json& j, const std::string& key, const std::string& at, T fallback) {
  if (!j.contains(key)) return fallback;
  return get_as<T>(j.at(key), at + "/" + key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Posets and set families.

/// {"n": N, "cover": [[x, y], ...], "labels": [...]}, with x covered by y.
inline Json poset_to_json(const Poset& p) {
  Json j;
  j["n"] = p.size();
  Json cover = Json::array();
  for (auto [x, y] : p.covers()) cover.push_back({x, y});
  j["cover"] = cover;
  if (!p.labels().empty()) j["labels"] = p.labels();
  return j;
}

inline Poset poset_from_json(const Json& j, const std::string& at = "") {
  const auto n = detail::get_field<std::size_t>(j, "n", at);
  const auto cover = detail::get_field_or<std::vector<std::pair<std::size_t, std::size_t>>>(j, "cover", at, {});
  const auto labels = detail::get_field_or<std::vector<std::string>>(j, "labels", at, {});
  if (!labels.empty() && labels.size() != n) throw ParseError(at + "/labels", "expected " + std::to_string(n) + " labels");
  try {
    return Poset::from_covers(n, cover, labels);
  } catch (const OrderError& e) {
    throw ParseError(at + "/cover", e.what());
  }
}

/// {"ground_n", "ground_cover", "sets": [[members], ...]}.
inline Json family_to_json(const SetFamily& f) {
  const auto g = poset_to_json(*f.ground());
  Json j;
  j["ground_n"] = g["n"];
  j["ground_cover"] = g["cover"];
  Json sets = Json::array();
  for (const auto& s : f.sets()) sets.push_back(s.members());
  j["sets"] = sets;
  return j;
}

inline SetFamily family_from_json(const Json& j, const std::string& at = "") {
  Json g;
  g["n"] = detail::field(j, "ground_n", at);
  g["cover"] = j.contains("ground_cover") ? j.at("ground_cover") : Json::array();
  const auto ground = share(poset_from_json(g, at));
  const auto sets = detail::get_field<std::vector<std::vector<std::size_t>>>(j, "sets", at);
  SetFamily f(ground, {});
  for (std::size_t k = 0; k < sets.size(); ++k) {
    for (auto x : sets[k])
      if (x >= ground->size()) throw ParseError(at + "/sets/" + std::to_string(k), "element out of range");
    f.add(ElementSet::from_indices(ground->size(), sets[k]));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Maps, logs, diagrams, reports.

inline Json map_to_json(const PosetMap& m) {
  Json j;
  j["domain"] = poset_to_json(*m.domain());
  j["img"] = m.img();
  j["name"] = m.name();
  return j;
}

inline PosetMap map_from_json(const Json& j, const std::string& at = "") {
  const auto dom = share(poset_from_json(detail::field(j, "domain", at), at + "/domain"));
  const auto img = detail::get_field<std::vector<std::size_t>>(j, "img", at);
  if (img.size() != dom->size()) throw ParseError(at + "/img", "expected " + std::to_string(dom->size()) + " entries");
  for (std::size_t k = 0; k < img.size(); ++k)
    if (img[k] >= dom->size()) throw ParseError(at + "/img/" + std::to_string(k), "image out of range");
  return PosetMap(dom, img, detail::get_field_or<std::string>(j, "name", at, ""));
}

inline Json event_log_to_json(const EventLog& log, const std::vector<std::string>& names = {}) {
  Json j;
  j["s"] = log.s;
  j["u"] = log.u;
  j["seed"] = log.seed;
  Json ev = Json::array();
  for (const auto& e : log.events) {
    Json x;
    x["map"] = e.map;
    if (e.map < names.size()) x["name"] = names[e.map];
    x["t"] = e.time;
    ev.push_back(x);
  }
  j["events"] = ev;
  return j;
}

inline EventLog event_log_from_json(const Json& j, const std::string& at = "") {
  EventLog log;
  log.s = detail::get_field<double>(j, "s", at);
  log.u = detail::get_field<double>(j, "u", at);
  log.seed = detail::get_field_or<std::uint64_t>(j, "seed", at, 0);
  const auto& ev = detail::field(j, "events", at);
  if (!ev.is_array()) throw ParseError(at + "/events", "expected an array");
  for (std::size_t k = 0; k < ev.size(); ++k) {
    const auto p = at + "/events/" + std::to_string(k);
    log.events.push_back({detail::get_field<std::size_t>(ev[k], "map", p), detail::get_field<double>(ev[k], "t", p)});
  }
  try {
    validate_log(log);
  } catch (const std::invalid_argument& e) {
    throw ParseError(at + "/events", e.what());
  }
  return log;
}

/// {"ground": poset, "s", "u", "pair_sites", "events": [{"t", "name", "pairs": [[i, j], ...]}]}.
inline Json diagram_to_json(const Diagram& d) {
  Json j;
  j["ground"] = poset_to_json(*d.ground);
  j["s"] = d.s;
  j["u"] = d.u;
  if (d.pair_sites) j["pair_sites"] = d.pair_sites;
  if (!d.site_labels.empty()) j["site_labels"] = d.site_labels;
  Json ev = Json::array();
  for (const auto& e : d.events) {
    Json x;
    x["t"] = e.t;
    if (!e.name.empty()) x["name"] = e.name;
    Json pairs = Json::array();
    for (auto [a, b] : e.m.pairs()) pairs.push_back({a, b});
    x["pairs"] = pairs;
    ev.push_back(x);
  }
  j["events"] = ev;
  return j;
}

inline Diagram diagram_from_json(const Json& j, const std::string& at = "") {
  Diagram d;
  d.ground = share(poset_from_json(detail::field(j, "ground", at), at + "/ground"));
  d.s = detail::get_field_or<double>(j, "s", at, 0.0);
  d.u = detail::get_field<double>(j, "u", at);
  d.pair_sites = detail::get_field_or<std::size_t>(j, "pair_sites", at, 0);
  d.site_labels = detail::get_field_or<std::vector<std::string>>(j, "site_labels", at, {});
  const auto& ev = detail::field(j, "events", at);
  if (!ev.is_array()) throw ParseError(at + "/events", "expected an array");
  for (std::size_t k = 0; k < ev.size(); ++k) {
    const auto p = at + "/events/" + std::to_string(k);
    DiagramEvent e{detail::get_field<double>(ev[k], "t", p), MSet(d.ground), detail::get_field_or<std::string>(ev[k], "name", p, "")};
    for (auto [a, b] : detail::get_field<std::vector<std::pair<std::size_t, std::size_t>>>(ev[k], "pairs", p)) {
      if (a >= d.sites() || b >= d.sites()) throw ParseError(p + "/pairs", "site out of range");
      e.m.insert(a, b);
    }
    d.events.push_back(std::move(e));
  }
  try {
    validate_diagram(d);
  } catch (const std::invalid_argument& e) {
    throw ParseError(at + "/events", e.what());
  }
  return d;
}

inline Json report_to_json(const DualityReport& r) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["ok"] = r.ok;
  if (r.counterexample) {
    j["counterexample"] = {{"x", r.counterexample->x},
                           {"y", r.counterexample->y},
                           {"lhs", r.counterexample->lhs},
                           {"rhs", r.counterexample->rhs}};
  } else {
    j["counterexample"] = nullptr;
  }
  j["pairs_checked"] = r.pairs_checked;
  return j;
}

// ---------------------------------------------------------------------------
// Model specs.

inline Json model_spec_to_json(const ModelSpec& s) {
  Json j;
  j["model"] = s.model;
  if (!s.name.empty()) j["name"] = s.name;
  j["sites"] = s.sites;
  if (!s.pair_rates.empty()) j["pair_rates"] = s.pair_rates;
  if (!s.triple_rates.empty()) j["triple_rates"] = s.triple_rates;
  if (!s.voter_rates.empty()) j["voter_rates"] = s.voter_rates;
  if (!s.exclusion_rates.empty()) j["exclusion_rates"] = s.exclusion_rates;
  if (!s.a.empty()) j["a"] = s.a;
  if (!s.c.empty()) j["c"] = s.c;
  if (!s.d.empty()) j["d"] = s.d;
  if (!s.e.empty()) j["e"] = s.e;
  if (!s.beta.empty()) j["beta"] = s.beta;
  if (!s.delta.empty()) j["delta"] = s.delta;
  if (!s.maps.empty()) j["maps"] = s.maps;
  if (!s.rates.empty()) j["rates"] = s.rates;
  if (!s.map_names.empty()) j["map_names"] = s.map_names;
  if (s.poset) j["poset"] = poset_to_json(*s.poset);
  if (!s.prime.empty()) j["prime"] = s.prime;
  return j;
}

inline ModelSpec model_spec_from_json(const Json& j, const std::string& at = "") {
  using detail::get_field_or;
  ModelSpec s;
  s.model = detail::get_field<std::string>(j, "model", at);
  const auto& kinds = model_kinds();
  if (std::find(kinds.begin(), kinds.end(), s.model) == kinds.end())
    throw ParseError(at + "/model", "unknown model kind '" + s.model + "'");
  s.name = get_field_or<std::string>(j, "name", at, s.model);
  s.sites = get_field_or<std::size_t>(j, "sites", at, 0);
  s.pair_rates = get_field_or<std::vector<std::vector<double>>>(j, "pair_rates", at, {});
  s.triple_rates = get_field_or<std::vector<std::vector<std::vector<double>>>>(j, "triple_rates", at, {});
  s.voter_rates = get_field_or<std::vector<std::vector<double>>>(j, "voter_rates", at, {});
  s.exclusion_rates = get_field_or<std::vector<std::vector<double>>>(j, "exclusion_rates", at, {});
  s.a = get_field_or<std::vector<double>>(j, "a", at, {});
  s.c = get_field_or<std::vector<double>>(j, "c", at, {});
  s.d = get_field_or<std::vector<double>>(j, "d", at, {});
  s.e = get_field_or<std::vector<double>>(j, "e", at, {});
  s.beta = get_field_or<std::vector<std::vector<double>>>(j, "beta", at, {});
  s.delta = get_field_or<std::vector<std::vector<double>>>(j, "delta", at, {});
  s.maps = get_field_or<std::vector<std::vector<std::size_t>>>(j, "maps", at, {});
  s.rates = get_field_or<std::vector<double>>(j, "rates", at, {});
  s.map_names = get_field_or<std::vector<std::string>>(j, "map_names", at, {});
  if (j.contains("poset")) s.poset = poset_from_json(j.at("poset"), at + "/poset");
  s.prime = get_field_or<std::vector<std::size_t>>(j, "prime", at, {});
  return s;
}

// ---------------------------------------------------------------------------
// CSV.

inline std::string format_scalar(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_scalar(const Rational& v) {
  return v.denominator() == 1 ? std::to_string(v.numerator())
                              : std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// First row: an empty cell then the column labels; each later row starts with
/// its row label.
template <class Scalar>
std::string matrix_to_csv(const Matrix<Scalar>& m, const std::vector<std::string>& row_labels,
                          const std::vector<std::string>& col_labels) {
  if (row_labels.size() != m.rows() || col_labels.size() != m.cols()) throw std::invalid_argument("matrix_to_csv: label count mismatch");
  std::ostringstream os;
  for (const auto& c : col_labels) os << ',' << detail::csv_field(c);
  os << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << detail::csv_field(row_labels[i]);
    for (std::size_t j = 0; j < m.cols(); ++j) os << ',' << format_scalar(m(i, j));
    os << '\n';
  }
  return os.str();
}

struct TraceRow {
  std::size_t replica = 0;
  double t = 0;
  std::string x;
  std::string y;
  int psi = 0;
};

inline std::string trace_to_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream os;
  os << "replica,t,state_label_X,state_label_Y,psi\n";
  for (const auto& r : rows)
    os << r.replica << ',' << format_scalar(r.t) << ',' << detail::csv_field(r.x) << ',' << detail::csv_field(r.y) << ','
       << r.psi << '\n';
  return os.str();
}

}  // namespace orderdual
