// Samples a voter-model percolation picture on three sites, checks the
// graphical duality identity along it, and writes the SVG next to a Krone
// picture on two sites.
//
//   graphical_demo [output-dir]

#include <filesystem>
#include <iostream>
#include <string>

#include "orderdual/orderdual.hpp"

using namespace orderdual;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : ".";
  std::filesystem::create_directories(dir);

  // Voter model on {0,1}^3 seen as P(L) with L an antichain.
  const std::size_t k = 3;
  Relation diag(k, std::vector<bool>(k));
  for (std::size_t i = 0; i < k; ++i) diag[i][i] = true;
  const auto space = make_dec_space(share(Poset::from_relation(diag, {"0", "1", "2"})));
  const auto rep = build_voter<double>(k, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  const auto log = sample_event_log(rep, 0.0, 2.0, 7);

  Diagram d{space.ground, 0.0, 2.0, {}, 0, {"0", "1", "2"}};
  for (const auto& e : log.events) {
    const auto& m = rep.map(e.map);
    std::vector<std::size_t> img(space.size());
    for (std::size_t z = 0; z < space.size(); ++z) img[z] = space.index(ElementSet::from_mask(k, m(space.set(z).to_mask())));
    d.events.push_back({e.time, map_to_mset(space, PosetMap(space.poset, img, m.name())), m.name()});
  }

  std::size_t checked = 0, failed = 0;
  for (std::size_t x = 0; x < space.size(); ++x)
    for (std::size_t y = 0; y < space.size(); ++y) {
      const auto r = check_graphical_duality(d, space.set(x), space.set(y), d.s, d.u);
      ++checked;
      if (!r.ok) ++failed;
    }
  std::cout << "voter: " << d.events.size() << " events, graphical duality checked on " << checked << " pairs, "
            << failed << " failures\n";

  const auto x = ElementSet::from_indices(k, {0});
  const auto y = reach(d, x, d.s, d.u, Direction::forward);
  write_file((dir / "voter.svg").string(), render_svg(d, std::make_pair(x, y)));

  // Two-stage contact process on two sites, drawn on L x {0,1}.
  const auto model = build_model(builtin_spec("krone", 2));
  const auto coding = krone_set_coding(2);
  const auto klog = sample_event_log(model.rep, 0.0, 1.5, 11);
  Diagram kd{coding.forward.ground, 0.0, 1.5, {}, 2, coding.forward.ground->labels()};
  for (const auto& e : klog.events) {
    const auto& m = model.rep.map(e.map);
    kd.events.push_back({e.time, map_to_mset(coding.forward, krone_forward_set_map(coding, m)), m.name()});
  }
  write_file((dir / "krone.svg").string(), render_svg(kd));
  std::cout << "krone: " << kd.events.size() << " events\n";
  std::cout << "wrote " << (dir / "voter.svg").string() << " and " << (dir / "krone.svg").string() << "\n";
  return failed == 0 ? 0 : 1;
}
