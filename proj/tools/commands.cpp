#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "orderdual/orderdual.hpp"

namespace orderdual::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kSemigroupTol = 1e-8;
constexpr double kUniformizationTol = 1e-12;

bool is_builtin(const std::string& name) {
  const auto names = builtin_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Json load_json_arg(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("no builtin model or file named '" + path + "'");
  return parse_json(read_file(path));
}

std::size_t default_sites(const std::string& name) {
  return name == "siegmund" ? 4 : (name == "coop" ? 3 : 2);
}

Model load_model(const RunConfig& c) {
  if (is_builtin(c.model)) return build_model(builtin_spec(c.model, c.sites.value_or(default_sites(c.model))));
  return build_model(model_spec_from_json(load_json_arg(c.model)));
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) out << text;
  else write_file(c.out, text);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Labels.

std::vector<std::string> primal_labels(const Model& m) {
  std::vector<std::string> out;
  for (std::size_t x = 0; x < m.rep.space()->size(); ++x) out.push_back(m.rep.space()->label(x));
  return out;
}

/// For site models S' is S as a set, so a dual element is named by its own
/// configuration; otherwise by the view's primed label.
std::string dual_label(const Model& m, std::size_t y) {
  const auto& pr = m.pairing;
  if (*pr.dual() == *pr.primal() && !pr.primal()->labels().empty()) return pr.primal()->label(y);
  return pr.dual()->label(y);
}

std::string set_label(const Model& m, const ElementSet& b) {
  std::string s = "{";
  bool first = true;
  b.for_each([&](std::size_t y) {
    if (!first) s += ' ';
    s += dual_label(m, y);
    first = false;
  });
  return s + "}";
}

// ---------------------------------------------------------------------------
// The dual side of a model.

struct DualSide {
  DualVariant variant = DualVariant::prime;
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> trans;  // [map][state]
  std::vector<double> rates;
  std::vector<ElementSet> sets;      // monotone variants
  std::vector<std::vector<int>> psi;  // [x][state]
  std::vector<PosetMap> dual_maps;    // prime variant

  std::size_t size() const { return labels.size(); }
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Closure cache: $ORDERDUAL_CACHE/closure-<hash>.json holding the key, the
/// closure states and the transition table.
std::optional<std::filesystem::path> cache_path(const std::string& key) {
  const char* dir = std::getenv("ORDERDUAL_CACHE");
  if (!dir || !*dir) return std::nullopt;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return std::filesystem::path(dir) / ("closure-" + std::string(buf) + ".json");
}

MonotoneDualRep<double> closure_for(const Model& m, DualVariant v) {
  const std::size_t n = m.pairing.size();
  const std::string key = model_spec_to_json(m.spec).dump() + "|" + to_string(v);
  const auto path = cache_path(key);
  if (path && std::filesystem::exists(*path)) {
    try {
      const auto j = parse_json(read_file(path->string()));
      if (j.at("key").get<std::string>() == key) {
        MonotoneDualRep<double> r;
        r.variant = v;
        for (const auto& s : j.at("states")) r.states.push_back(ElementSet::from_indices(n, s.get<std::vector<std::size_t>>()));
        r.transitions = j.at("transitions").get<std::vector<std::vector<std::size_t>>>();
        r.rates = m.rep.rates();
        r.generator = build_generator<double>(r.states.size(), r.transitions, r.rates);
        return r;
      }
    } catch (const std::exception&) {
      // fall through and rebuild
    }
  }
  std::vector<ElementSet> seeds;
  for (std::size_t y = 0; y < n; ++y) seeds.push_back(ElementSet::from_indices(n, {y}));
  auto r = dual_rep_monotone<double>(m.pairing, m.rep, seeds, v);
  if (path) {
    Json j;
    j["key"] = key;
    Json states = Json::array();
    for (const auto& s : r.states) states.push_back(s.members());
    j["states"] = states;
    j["transitions"] = r.transitions;
    std::filesystem::create_directories(path->parent_path());
    write_file(path->string(), j.dump());
  }
  return r;
}

DualSide make_dual(const Model& m, DualVariant v, bool perturb) {
  DualSide d;
  d.variant = v;
  d.rates = m.rep.rates();
  const auto& pr = m.pairing;
  const std::size_t nx = m.rep.space()->size();
  if (v == DualVariant::prime) {
    for (const auto& map : m.rep.maps()) d.dual_maps.push_back(additive_dual(pr, map));
    for (std::size_t y = 0; y < pr.size(); ++y) d.labels.push_back(dual_label(m, y));
    for (const auto& dm : d.dual_maps) d.trans.push_back(dm.img());
    d.psi.assign(nx, std::vector<int>(pr.size()));
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < pr.size(); ++y) d.psi[x][y] = pr.pairing_value(x, y);
  } else {
    auto r = closure_for(m, v);
    d.sets = r.states;
    d.trans = r.transitions;
    for (const auto& s : d.sets) d.labels.push_back(set_label(m, s));
    d.psi.assign(nx, std::vector<int>(d.sets.size()));
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t k = 0; k < d.sets.size(); ++k)
        d.psi[x][k] = uses_phi_tilde(v) ? pr.phi_tilde_value(x, d.sets[k]) : pr.phi_value(x, d.sets[k]);
  }
  if (perturb && !d.rates.empty()) d.rates[0] *= 1.5;
  return d;
}

DualVariant choose_variant(const RunConfig& c, const Model& m) {
  if (c.variant) {
    auto v = parse_variant(*c.variant);
    if (!v) throw UsageError("unknown variant '" + *c.variant + "'");
    return *v;
  }
  return m.additive ? DualVariant::prime : DualVariant::star;
}

template <class Scalar>
Matrix<Scalar> psi_of(const DualSide& d) {
  return psi_matrix<Scalar>(d.psi.size(), d.size(), [&](std::size_t x, std::size_t y) { return d.psi[x][y]; });
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_models_list(const RunConfig& c, std::ostream& out) {
  Json list = Json::array();
  for (const auto& name : builtin_names()) {
    const std::size_t sites = default_sites(name);
    const auto m = build_model(builtin_spec(name, sites));
    Json j;
    j["name"] = name;
    j["default_sites"] = sites;
    j["states"] = m.rep.space()->size();
    j["maps"] = m.rep.size();
    j["additive"] = m.additive;
    j["monotone"] = m.monotone;
    list.push_back(j);
  }
  Json j;
  j["builtins"] = list;
  j["kinds"] = model_kinds();
  emit(c, dump(j), out);
  return kExitPass;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c);
  const auto& s = *m.rep.space();
  const auto lat = analyze_lattice(m.rep.space());
  const bool semilattice = lat.is_join_semilattice && lat.bottom.has_value();
  Json maps = Json::array();
  for (std::size_t k = 0; k < m.rep.size(); ++k) {
    const auto& map = m.rep.map(k);
    Json j;
    j["name"] = map.name();
    j["rate"] = m.rep.rate(k);
    const auto mono = is_monotone(map);
    j["monotone"] = mono.holds;
    std::optional<MapCheck> add;
    if (semilattice) add = is_additive(map, lat, lat);
    j["additive"] = add ? Json(add->holds) : Json(nullptr);
    const MapCheck* failed = nullptr;
    if (!mono.holds) {
      j["class"] = "not monotone";
      failed = &mono;
    } else if (add && add->holds) {
      j["class"] = "additive";
    } else {
      j["class"] = "monotone, not additive";
      if (add) failed = &*add;
    }
    if (failed && failed->witness)
      j["witness"] = {{"x", s.label(failed->witness->first)}, {"y", s.label(failed->witness->second)}, {"detail", failed->detail}};
    else
      j["witness"] = nullptr;
    maps.push_back(j);
  }
  Json j;
  j["model"] = m.spec.name;
  j["states"] = s.size();
  j["additive"] = m.additive;
  j["monotone"] = m.monotone;
  j["maps"] = maps;
  emit(c, dump(j), out);
  return kExitPass;
}

Json counterexample_json(const Model& m, const DualSide& d, const DualityReport& r) {
  if (!r.counterexample) return nullptr;
  return {{"x", m.rep.space()->label(r.counterexample->x)},
          {"y", d.labels.at(r.counterexample->y)},
          {"lhs", r.counterexample->lhs},
          {"rhs", r.counterexample->rhs}};
}

/// One duality report per (m, dual of m) pair.
Json map_duality_check(const Model& m, const DualSide& d, bool& ok, Json& first) {
  Json pairs = Json::array();
  for (std::size_t k = 0; k < m.rep.size(); ++k) {
    DualityReport r;
    if (d.variant == DualVariant::prime) {
      r = verify_additive_pair(m.pairing, m.rep.map(k), d.dual_maps[k]);
    } else {
      const auto& map = m.rep.map(k);
      const auto& tr = d.trans[k];
      r = verify_map_duality(
          m.rep.space()->size(), d.size(), [&](std::size_t x, std::size_t b) { return d.psi[x][b]; },
          [&](std::size_t x) { return map(x); }, [&](std::size_t b) { return tr[b]; });
    }
    auto j = report_to_json(r);
    j["map"] = m.rep.map(k).name();
    j["counterexample"] = counterexample_json(m, d, r);
    if (!r.ok && ok) {
      ok = false;
      first = {{"check", "map_duality"}, {"map", m.rep.map(k).name()}, {"detail", j["counterexample"]}};
    }
    pairs.push_back(j);
  }
  return pairs;
}

int cmd_dualize(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c);
  const auto v = choose_variant(c, m);
  const auto d = make_dual(m, v, false);
  bool ok = true;
  Json first = nullptr;
  const auto reports = map_duality_check(m, d, ok, first);
  Json j;
  j["source"] = m.spec.name;
  j["variant"] = to_string(v);
  if (v == DualVariant::prime) {
    ModelSpec spec;
    spec.model = "custom";
    spec.name = m.spec.name + "'";
    spec.sites = m.spec.sites;
    Poset dual = *m.pairing.dual();
    if (*m.pairing.dual() == *m.pairing.primal()) dual = *m.pairing.primal();
    spec.poset = dual;
    for (std::size_t k = 0; k < d.dual_maps.size(); ++k) {
      spec.maps.push_back(d.dual_maps[k].img());
      spec.map_names.push_back(d.dual_maps[k].name());
    }
    spec.rates = d.rates;
    j["dual"] = model_spec_to_json(spec);
  } else {
    Json states = Json::array();
    for (std::size_t k = 0; k < d.size(); ++k) states.push_back({{"label", d.labels[k]}, {"members", d.sets[k].members()}});
    Json maps = Json::array();
    for (std::size_t k = 0; k < m.rep.size(); ++k) {
      Json mj;
      mj["name"] = m.rep.map(k).name() + (v == DualVariant::star ? "*" : "^");
      mj["rate"] = d.rates[k];
      mj["transitions"] = d.trans[k];
      if (v == DualVariant::star && k < m.star_parts.size()) {
        Json parts = Json::array();
        for (const auto& p : m.star_parts[k]) parts.push_back(p.name());
        mj["union_of"] = parts;
      }
      maps.push_back(mj);
    }
    j["dual"] = {{"states", states}, {"maps", maps}};
  }
  j["reports"] = reports;
  j["ok"] = ok;
  emit(c, dump(j), out);
  return ok ? kExitPass : kExitFail;
}

template <class Scalar>
Json intertwining_json(const Model& m, const DualSide& d, Scalar tol, bool& ok, Json& first) {
  BasicMappingRep<Scalar> rep;
  std::vector<Scalar> rates;
  if constexpr (std::is_same_v<Scalar, Rational>) {
    rep = m.rep.cast<Rational>();
    for (double r : d.rates) rates.push_back(exact_rational(r));
  } else {
    rep = m.rep;
    rates = d.rates;
  }
  const auto qx = build_generator(rep);
  const auto qd = build_generator<Scalar>(d.size(), d.trans, rates);
  const auto rep_r = check_intertwining(qx, qd, psi_of<Scalar>(d), tol);
  Json j;
  j["check"] = "intertwining";
  j["ok"] = rep_r.ok;
  j["residual"] = format_scalar(rep_r.residual);
  j["at"] = {{"x", m.rep.space()->label(rep_r.row)}, {"y", d.labels.at(rep_r.col)}};
  if (!rep_r.ok && ok) {
    ok = false;
    first = {{"check", "intertwining"}, {"x", m.rep.space()->label(rep_r.row)}, {"y", d.labels.at(rep_r.col)},
             {"residual", format_scalar(rep_r.residual)}};
  }
  return j;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c);
  const auto v = choose_variant(c, m);
  const auto d = make_dual(m, v, c.perturb);
  bool ok = true;
  Json first = nullptr;
  Json checks = Json::array();

  {
    Json j;
    j["check"] = "map_duality";
    bool local = true;
    j["pairs"] = map_duality_check(m, d, local, first);
    j["ok"] = local;
    ok = ok && local;
    checks.push_back(j);
  }

  if (c.exact) checks.push_back(intertwining_json<Rational>(m, d, Rational(0), ok, first));
  else checks.push_back(intertwining_json<double>(m, d, c.tol, ok, first));

  {
    const auto qx = build_generator(m.rep);
    const auto qd = build_generator<double>(d.size(), d.trans, d.rates);
    const auto r = semigroup_duality_check(qx, qd, psi_of<double>(d), c.t, kSemigroupTol, kUniformizationTol);
    Json j;
    j["check"] = "semigroup";
    j["t"] = c.t;
    j["ok"] = r.ok;
    j["residual"] = r.residual;
    if (!r.ok && ok) {
      ok = false;
      first = {{"check", "semigroup"}, {"x", m.rep.space()->label(r.row)}, {"y", d.labels.at(r.col)}, {"residual", r.residual}};
    }
    checks.push_back(j);
  }

  {
    const std::size_t logs = c.n.value_or(100);
    std::size_t violations = 0;
    Json first_violation = nullptr;
    const std::size_t nx = m.rep.space()->size();
    for (std::size_t k = 0; k < logs; ++k) {
      const auto log = sample_event_log(m.rep.rates(), 0.0, c.t, c.seed + k);
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < d.size(); ++y) {
          const auto r = check_pathwise_constancy<std::size_t, std::size_t>(
              log, [&](std::size_t i, std::size_t z) { return m.rep.map(i)(z); },
              [&](std::size_t i, std::size_t b) { return d.trans[i][b]; },
              [&](std::size_t a, std::size_t b) { return d.psi[a][b]; }, x, y);
          if (r.ok) continue;
          ++violations;
          if (first_violation.is_null())
            first_violation = {{"log_seed", log.seed}, {"x", m.rep.space()->label(x)}, {"y", d.labels[y]},
                               {"time", *r.first_violation}};
        }
    }
    Json j;
    j["check"] = "pathwise";
    j["logs"] = logs;
    j["violations"] = violations;
    j["first_violation"] = first_violation;
    j["ok"] = violations == 0;
    if (violations && ok) {
      ok = false;
      first = {{"check", "pathwise"}, {"detail", first_violation}};
    }
    checks.push_back(j);
  }

  Json j;
  j["model"] = m.spec.name;
  j["variant"] = to_string(v);
  j["arithmetic"] = c.exact ? "exact" : "float";
  j["t"] = c.t;
  j["perturbed"] = c.perturb;
  j["checks"] = checks;
  j["ok"] = ok;
  j["first_counterexample"] = first;
  emit(c, dump(j), out);
  return ok ? kExitPass : kExitFail;
}

std::size_t find_label(const std::vector<std::string>& labels, const std::string& want, const char* what) {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == want) return k;
  throw UsageError(std::string("no ") + what + " labelled '" + want + "'");
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c);
  const auto v = choose_variant(c, m);
  const auto d = make_dual(m, v, c.perturb);
  const auto labels = primal_labels(m);
  const std::size_t nx = labels.size();
  const std::size_t x0 = c.x ? find_label(labels, *c.x, "state") : std::min<std::size_t>(1, nx - 1);
  const std::size_t y0 = c.y ? find_label(d.labels, *c.y, "dual state") : std::min<std::size_t>(2, d.size() - 1);
  const std::size_t replicas = c.n.value_or(1000);
  if (replicas == 0) throw UsageError("--n must be at least 1");

  auto forward = [&](std::size_t k, std::size_t z) { return m.rep.map(k)(z); };
  auto backward = [&](std::size_t k, std::size_t b) { return d.trans[k][b]; };
  auto psi = [&](std::size_t a, std::size_t b) { return d.psi[a][b]; };
  const auto mc = monte_carlo_duality(m.rep.rates(), d.rates, forward, backward, psi, x0, y0, c.t, replicas, c.seed, c.jobs);

  const auto px = transition_matrix(build_generator(m.rep), c.t, kUniformizationTol);
  const auto pd = transition_matrix(build_generator<double>(d.size(), d.trans, d.rates), c.t, kUniformizationTol);
  double exact_lhs = 0, exact_rhs = 0;
  for (std::size_t z = 0; z < nx; ++z) exact_lhs += px(x0, z) * d.psi[z][y0];
  for (std::size_t w = 0; w < d.size(); ++w) exact_rhs += pd(y0, w) * d.psi[x0][w];

  if (!c.trace.empty()) {
    std::vector<TraceRow> rows;
    const std::size_t traced = std::min<std::size_t>(replicas, 20);
    for (std::size_t r = 0; r < traced; ++r) {
      SplitMix64 seeder(c.seed + r);
      const auto log = sample_event_log(m.rep.rates(), 0.0, c.t, seeder.next());
      const auto& ev = log.events;
      std::vector<std::size_t> ys(ev.size() + 1, y0);
      for (std::size_t k = ev.size(); k-- > 0;) ys[k] = backward(ev[k].map, ys[k + 1]);
      std::size_t x = x0;
      for (std::size_t k = 0; k <= ev.size(); ++k) {
        rows.push_back({r, k == 0 ? 0.0 : ev[k - 1].time, labels[x], d.labels[ys[k]], psi(x, ys[k])});
        if (k < ev.size()) x = forward(ev[k].map, x);
      }
      rows.push_back({r, c.t, labels[x], d.labels[y0], psi(x, y0)});
    }
    write_file(c.trace, trace_to_csv(rows));
  }

  auto z = [&](double mean, double exact) { return mc.stderr_pooled > 0 ? (mean - exact) / mc.stderr_pooled : 0.0; };
  Json j;
  j["model"] = m.spec.name;
  j["variant"] = to_string(v);
  j["t"] = c.t;
  j["replicas"] = replicas;
  j["seed"] = c.seed;
  j["x0"] = labels[x0];
  j["y0"] = d.labels[y0];
  j["mean_lhs"] = mc.mean_lhs;
  j["mean_rhs"] = mc.mean_rhs;
  j["stderr_pooled"] = mc.stderr_pooled;
  j["exact_lhs"] = exact_lhs;
  j["exact_rhs"] = exact_rhs;
  j["z_lhs"] = z(mc.mean_lhs, exact_lhs);
  j["z_rhs"] = z(mc.mean_rhs, exact_lhs);
  j["within_3_stderr"] = std::fabs(z(mc.mean_lhs, exact_lhs)) <= 3 && std::fabs(z(mc.mean_rhs, exact_lhs)) <= 3;
  j["mean_events_lhs"] = mc.mean_events_lhs;
  j["mean_events_rhs"] = mc.mean_events_rhs;
  double total = 0, dual_total = 0;
  for (double r : m.rep.rates()) total += r;
  for (double r : d.rates) dual_total += r;
  j["expected_events_lhs"] = total * c.t;
  j["expected_events_rhs"] = dual_total * c.t;
  emit(c, dump(j), out);
  return kExitPass;
}

/// A sampled percolation picture for an additive site model or Krone.
Diagram model_diagram(const Model& m, const RunConfig& c) {
  if (!m.additive) throw NotAdditive("render: " + m.spec.name + " has non-additive maps and no percolation picture", 0);
  const auto log = sample_event_log(m.rep.rates(), 0.0, c.t, c.seed);
  Diagram d;
  d.s = 0;
  d.u = c.t;
  const std::size_t k = m.spec.sites;
  if (m.spec.model == "krone") {
    const auto coding = krone_set_coding(k);
    d.ground = coding.forward.ground;
    d.pair_sites = k;
    d.site_labels = d.ground->labels();
    for (const auto& e : log.events) {
      const auto& map = m.rep.map(e.map);
      d.events.push_back({e.time, map_to_mset(coding.forward, krone_forward_set_map(coding, map)), map.name()});
    }
    return d;
  }
  if (m.spec.model == "siegmund" || m.spec.model == "custom")
    throw UsageError("render: no site picture for model kind '" + m.spec.model + "'");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back(std::to_string(i));
  Relation diag(k, std::vector<bool>(k));
  for (std::size_t i = 0; i < k; ++i) diag[i][i] = true;
  const auto space = make_dec_space(share(Poset::from_relation(diag, labels)));
  d.ground = space.ground;
  d.site_labels = labels;
  for (const auto& e : log.events) {
    const auto& map = m.rep.map(e.map);
    std::vector<std::size_t> img(space.size());
    for (std::size_t z = 0; z < space.size(); ++z)
      img[z] = space.index(ElementSet::from_mask(k, map(space.set(z).to_mask())));
    d.events.push_back({e.time, map_to_mset(space, PosetMap(space.poset, img, map.name())), map.name()});
  }
  return d;
}

int cmd_render(const RunConfig& c, std::ostream& out) {
  Diagram d;
  if (is_builtin(c.model)) {
    d = model_diagram(load_model(c), c);
  } else {
    const auto j = load_json_arg(c.model);
    if (j.contains("ground")) d = diagram_from_json(j);
    else d = model_diagram(build_model(model_spec_from_json(j)), c);
  }
  emit(c, render_svg(d), out);
  return kExitPass;
}

}  // namespace

int run_config(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.t < 0) throw UsageError("--t must be >= 0");
    if (!(c.tol > 0)) throw UsageError("--tol must be > 0");
    if (c.subcommand == "models-list") return cmd_models_list(c, out);
    if (c.subcommand == "classify") return cmd_classify(c, out);
    if (c.subcommand == "dualize") return cmd_dualize(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out);
    if (c.subcommand == "simulate") return cmd_simulate(c, out);
    if (c.subcommand == "render") return cmd_render(c, out);
    throw UsageError("unknown subcommand '" + c.subcommand + "'");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error at " << e.what() << "\n";
    return kExitUsage;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidPoset& e) {
    err << "invalid poset: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotAdditive& e) {
    err << "not additive: " << e.what() << "\n";
    return kExitFail;
  } catch (const NotMonotone& e) {
    err << "not monotone: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pathwise dualities of monotone and additive Markov processes on finite posets", "orderdual"};
  app.require_subcommand(1, 1);
  RunConfig c;
  std::size_t n = 0, sites = 0;
  std::string variant, x, y;

  app.add_option("--model", c.model, "builtin model name or JSON file");
  auto* sites_opt = app.add_option("--sites", sites, "sites for builtin models (chain length n for siegmund)");
  app.add_option("--t", c.t, "time horizon");
  auto* n_opt = app.add_option("--n", n, "replicas (simulate) or sampled logs (verify)");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--tol", c.tol, "intertwining tolerance in float mode");
  auto* v_opt = app.add_option("--variant", variant, "dual variant")
                    ->check(CLI::IsMember({"prime", "dagger", "star", "circ", "bullet"}));
  app.add_flag("--exact", c.exact, "exact rational arithmetic for intertwining");
  app.add_option("--out", c.out, "output file");
  app.add_option("--trace", c.trace, "trace CSV (simulate)");
  app.add_option("--jobs", c.jobs, "worker threads (simulate)");
  app.add_flag("--perturb", c.perturb, "scale the first dual rate by 1.5");
  auto* x_opt = app.add_option("--x", x, "initial state label (simulate)");
  auto* y_opt = app.add_option("--y", y, "initial dual state label (simulate)");

  for (const char* name : {"classify", "dualize", "verify", "simulate", "render", "models-list"})
    app.add_subcommand(name)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitPass : kExitUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  if (n_opt->count()) c.n = n;
  if (sites_opt->count()) c.sites = sites;
  if (v_opt->count()) c.variant = variant;
  if (x_opt->count()) c.x = x;
  if (y_opt->count()) c.y = y;
  return run_config(c, out, err);
}

}  // namespace orderdual::cli
