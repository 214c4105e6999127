#include <gtest/gtest.h>

#include "orderdual/io.hpp"
#include "orderdual/models.hpp"
#include "support/generators.hpp"

using namespace orderdual;

TEST(Json, ParseErrorCarriesLocation) {
  try {
    parse_json("{\"n\": 3,, }");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where().rfind("byte ", 0), 0u);
  }
  EXPECT_THROW(read_file("/nonexistent/orderdual.json"), ParseError);
}

TEST(Json, PosetRoundTrip) {
  testgen::Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = testgen::random_poset(rng, 1 + testgen::uniform_index(rng, 7));
    EXPECT_EQ(poset_from_json(poset_to_json(p)), p);
  }
  const auto g = grid_poset(2, 2);
  const auto back = poset_from_json(parse_json(poset_to_json(g).dump()));
  EXPECT_EQ(back, g);
  EXPECT_EQ(back.labels(), g.labels());
}

TEST(Json, PosetErrors) {
  EXPECT_THROW(poset_from_json(parse_json(R"({"cover": []})")), ParseError);
  EXPECT_THROW(poset_from_json(parse_json(R"({"n": 2, "cover": [[0, 1], [1, 0]]})")), ParseError);
  EXPECT_THROW(poset_from_json(parse_json(R"({"n": 2, "labels": ["a"]})")), ParseError);
  try {
    poset_from_json(parse_json(R"({"n": "two"})"), "/model/poset");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "/model/poset/n");
  }
}

TEST(Json, FamilyAndMapRoundTrip) {
  const auto fam = decreasing_family(share(Poset::chain(3)));
  const auto back = family_from_json(family_to_json(fam));
  ASSERT_EQ(back.size(), fam.size());
  for (std::size_t k = 0; k < fam.size(); ++k) EXPECT_EQ(back[k], fam[k]);
  const auto sp = site_space(2, 3);
  const auto m = krone_map(sp, KroneKind::b, 0, 1);
  const auto mj = map_from_json(map_to_json(m));
  EXPECT_EQ(mj, m);
  EXPECT_EQ(mj.name(), "b_01");
}

TEST(Json, EventLogRoundTrip) {
  const auto m = build_model(builtin_spec("voter", 3));
  const auto log = sample_event_log(m.rep, 0, 2, 17);
  std::vector<std::string> names;
  for (const auto& f : m.rep.maps()) names.push_back(f.name());
  const auto j = event_log_to_json(log, names);
  EXPECT_EQ(event_log_from_json(parse_json(j.dump())), log);
  if (!log.events.empty()) EXPECT_EQ(j["events"][0]["name"], names[log.events[0].map]);
  EXPECT_THROW(event_log_from_json(parse_json(R"({"s": 0, "u": 1, "events": [{"map": 0, "t": 2}]})")), ParseError);
}

TEST(Json, DiagramRoundTrip) {
  const auto coding = krone_set_coding(2);
  const auto model = build_model(builtin_spec("krone", 2));
  Diagram d{coding.forward.ground, 0, 1, {}, 2, coding.forward.ground->labels()};
  const auto log = sample_event_log(model.rep, 0, 1, 3);
  for (const auto& e : log.events)
    d.events.push_back({e.time, map_to_mset(coding.forward, krone_forward_set_map(coding, model.rep.map(e.map))),
                        model.rep.map(e.map).name()});
  const auto back = diagram_from_json(parse_json(diagram_to_json(d).dump()));
  EXPECT_EQ(render_svg(back), render_svg(d));
  ASSERT_EQ(back.events.size(), d.events.size());
  for (std::size_t k = 0; k < d.events.size(); ++k) EXPECT_EQ(back.events[k].m, d.events[k].m);
  EXPECT_THROW(diagram_from_json(parse_json(R"({"ground": {"n": 2}, "u": 1, "events": [{"t": 0.5, "pairs": [[0, 5]]}]})")),
               ParseError);
}

TEST(Json, ModelSpecRoundTrip) {
  for (const auto& name : builtin_names()) {
    const auto s = builtin_spec(name, 3);
    const auto back = model_spec_from_json(parse_json(model_spec_to_json(s).dump()));
    EXPECT_EQ(model_spec_to_json(back), model_spec_to_json(s));
    EXPECT_EQ(build_generator(build_model(back).rep), build_generator(build_model(s).rep));
  }
  EXPECT_THROW(model_spec_from_json(parse_json(R"({"model": "ising"})")), ParseError);
  EXPECT_THROW(model_spec_from_json(parse_json(R"({"sites": 2})")), ParseError);
}

TEST(Json, ReportShape) {
  const auto r = verify_map_duality({{1, 1}, {0, 1}}, {0, 1}, {1, 0});
  const auto j = report_to_json(r);
  EXPECT_EQ(j["mode"], "equal");
  EXPECT_EQ(j["ok"], false);
  EXPECT_EQ(j["counterexample"]["x"], 1);
  EXPECT_TRUE(report_to_json(verify_map_duality({{1}}, {0}, {0}))["counterexample"].is_null());
}

TEST(Csv, ScalarsMatrixAndTrace) {
  EXPECT_EQ(format_scalar(0.5), "0.5");
  EXPECT_EQ(format_scalar(Rational(3, 4)), "3/4");
  EXPECT_EQ(format_scalar(Rational(-2)), "-2");
  Matrix<Rational> m(2, 2);
  m(0, 1) = Rational(1, 2);
  EXPECT_EQ(matrix_to_csv(m, {"a", "b,c"}, {"x", "y"}), ",x,y\na,0,1/2\n\"b,c\",0,0\n");
  EXPECT_THROW(matrix_to_csv(m, {"a"}, {"x", "y"}), std::invalid_argument);
  EXPECT_EQ(trace_to_csv({{0, 0.25, "10", "{01}", 1}}), "replica,t,state_label_X,state_label_Y,psi\n0,0.25,10,{01},1\n");
}
