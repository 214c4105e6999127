#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "orderdual/io.hpp"

using namespace orderdual;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  return {code, o.str(), e.str()};
}

Json run_json(std::vector<std::string> args, int expect = 0) {
  const auto r = run(std::move(args));
  EXPECT_EQ(r.code, expect) << r.err;
  return parse_json(r.out);
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "orderdual_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, ModelsList) {
  const auto j = run_json({"models-list"});
  ASSERT_EQ(j["builtins"].size(), 5u);
  EXPECT_EQ(j["builtins"][2]["name"], "coop");
  EXPECT_EQ(j["builtins"][2]["additive"], false);
  EXPECT_EQ(j["kinds"].back(), "custom");
}

TEST(Cli, Classify) {
  const auto v = run_json({"classify", "--model", "voter", "--sites", "3"});
  EXPECT_EQ(v["states"], 8);
  EXPECT_EQ(v["additive"], true);
  for (const auto& m : v["maps"]) EXPECT_EQ(m["class"], "additive");

  const auto c = run_json({"classify", "--model", "coop", "--sites", "3"});
  EXPECT_EQ(c["additive"], false);
  EXPECT_EQ(c["monotone"], true);
  int nonadd = 0;
  for (const auto& m : c["maps"]) {
    const std::string name = m["name"];
    if (name[0] == 'b') {
      EXPECT_EQ(m["class"], "monotone, not additive");
      EXPECT_FALSE(m["witness"].is_null());
      ++nonadd;
    } else {
      EXPECT_EQ(m["class"], "additive");
    }
  }
  EXPECT_EQ(nonadd, 6);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"classify", "--bogus"}).code, 2);
  EXPECT_EQ(run({"dualize", "--variant", "sideways"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"classify", "--model", "no_such_model"}).code, 2);
  EXPECT_EQ(run({"verify", "--t", "-1"}).code, 2);
  EXPECT_EQ(run({"verify", "--tol", "0"}).code, 2);

  const auto bad = scratch("malformed.json");
  write_file(bad.string(), "{\"model\": \"custom\", ");
  const auto r = run({"classify", "--model", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("byte"), std::string::npos);

  const auto unknown = scratch("unknown_kind.json");
  write_file(unknown.string(), R"({"model": "ising"})");
  const auto r2 = run({"classify", "--model", unknown.string()});
  EXPECT_EQ(r2.code, 2);
  EXPECT_NE(r2.err.find("/model"), std::string::npos);
}

TEST(Cli, DualizeVoterGivesWalks) {
  const auto j = run_json({"dualize", "--model", "voter"});
  EXPECT_EQ(j["variant"], "prime");
  EXPECT_EQ(j["ok"], true);
  const auto& maps = j["dual"]["maps"];
  ASSERT_EQ(maps.size(), 2u);
  // vot_01 dualizes to a walker step from site 1 to site 0.
  EXPECT_EQ(maps[0], Json::parse("[0,1,1,1]"));
  EXPECT_EQ(maps[1], Json::parse("[0,2,2,2]"));

  // The emitted dual is itself a loadable model whose dual is the voter model.
  const auto path = scratch("voter_dual.json");
  write_file(path.string(), j["dual"].dump());
  const auto back = run_json({"dualize", "--model", path.string()});
  EXPECT_EQ(back["ok"], true);
  const auto again = run_json({"classify", "--model", path.string()});
  EXPECT_EQ(again["additive"], true);
}

TEST(Cli, DualizeKroneAndCoop) {
  const auto k = run_json({"dualize", "--model", "krone"});
  EXPECT_EQ(k["ok"], true);
  EXPECT_EQ(k["dual"]["maps"].size(), 10u);

  const auto c = run_json({"dualize", "--model", "coop", "--sites", "3"});
  EXPECT_EQ(c["variant"], "star");
  EXPECT_EQ(c["ok"], true);
  bool has_union = false;
  for (const auto& m : c["dual"]["maps"]) {
    EXPECT_FALSE(m["union_of"].empty());
    if (m["union_of"].size() == 2) has_union = true;
  }
  EXPECT_TRUE(has_union);

  const auto dg = run_json({"dualize", "--model", "coop", "--sites", "3", "--variant", "dagger"});
  EXPECT_EQ(dg["variant"], "dagger");
  EXPECT_EQ(dg["ok"], true);

  EXPECT_EQ(run({"dualize", "--model", "coop", "--sites", "3", "--variant", "prime"}).code, 1);
}

TEST(Cli, VerifyBuiltins) {
  for (const std::string name : {"voter", "krone", "coop", "siegmund", "spin"}) {
    const auto j = run_json({"verify", "--model", name});
    EXPECT_EQ(j["ok"], true) << name;
    EXPECT_TRUE(j["first_counterexample"].is_null()) << name;
    ASSERT_EQ(j["checks"].size(), 4u);
  }
  const auto ex = run_json({"verify", "--model", "krone", "--exact"});
  EXPECT_EQ(ex["arithmetic"], "exact");
  EXPECT_EQ(ex["checks"][1]["residual"], "0");

  const auto t0 = run_json({"verify", "--model", "coop", "--t", "0"});
  EXPECT_EQ(t0["ok"], true);
}

TEST(Cli, VerifyPerturbedFails) {
  const auto j = run_json({"verify", "--model", "krone", "--perturb", "--exact"}, 1);
  EXPECT_EQ(j["ok"], false);
  EXPECT_EQ(j["perturbed"], true);
  EXPECT_EQ(j["first_counterexample"]["check"], "intertwining");
  EXPECT_EQ(j["checks"][0]["ok"], true);
}

TEST(Cli, SimulateDeterministic) {
  const std::vector<std::string> args{"simulate", "--model", "krone", "--n", "3000", "--seed", "11"};
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(run(args).out, a.out);
  auto jobs = args;
  jobs.insert(jobs.end(), {"--jobs", "4"});
  EXPECT_EQ(run(jobs).out, a.out);

  const auto j = parse_json(a.out);
  EXPECT_EQ(j["replicas"], 3000);
  EXPECT_NEAR(j["exact_lhs"].get<double>(), j["exact_rhs"].get<double>(), 1e-12);

  const auto one = run_json({"simulate", "--model", "voter", "--n", "1"});
  EXPECT_EQ(one["replicas"], 1);
}

TEST(Cli, SimulateWithinThreeStderr) {
  const auto j = run_json({"simulate", "--model", "voter", "--sites", "3", "--n", "20000", "--seed", "5", "--t", "0.7"});
  EXPECT_EQ(j["within_3_stderr"], true);
  EXPECT_LT(std::abs(j["z_lhs"].get<double>()), 3.0);
  EXPECT_LT(std::abs(j["z_rhs"].get<double>()), 3.0);
  EXPECT_NEAR(j["mean_events_lhs"].get<double>(), j["expected_events_lhs"].get<double>(), 0.1);
}

TEST(Cli, SimulateTrace) {
  const auto path = scratch("trace.csv");
  fs::remove(path);
  run_json({"simulate", "--model", "voter", "--n", "3", "--trace", path.string()});
  const auto csv = read_file(path.string());
  EXPECT_EQ(csv.rfind("replica,t,state_label_X,state_label_Y,psi\n", 0), 0u);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  EXPECT_GT(lines, 3u);
}

TEST(Cli, SimulateInitialStates) {
  const auto j = run_json({"simulate", "--model", "voter", "--n", "10", "--x", "11", "--y", "11"});
  EXPECT_EQ(j["x0"], "11");
  EXPECT_EQ(j["mean_lhs"], 0.0);
  EXPECT_EQ(run({"simulate", "--model", "voter", "--x", "zz"}).code, 2);
}

TEST(Cli, RenderGolden) {
  const std::vector<std::string> args{"render", "--model", "voter", "--sites", "3", "--seed", "7", "--t", "2"};
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(run(args).out, a.out);
  const std::string golden = std::string(ORDERDUAL_TEST_DATA) + "/render_voter_s3_seed7.svg";
  if (std::getenv("ORDERDUAL_UPDATE_GOLDEN")) write_file(golden, a.out);
  EXPECT_EQ(read_file(golden), a.out);
}

TEST(Cli, RenderEmptyAndKrone) {
  const auto empty = run({"render", "--model", "voter", "--sites", "3", "--t", "0"});
  ASSERT_EQ(empty.code, 0) << empty.err;
  EXPECT_EQ(empty.out.find("class=\"arrow\""), std::string::npos);
  EXPECT_NE(empty.out.find("class=\"site\""), std::string::npos);

  const auto dpath = scratch("empty_diagram.json");
  write_file(dpath.string(), R"({"ground": {"n": 2, "labels": ["p", "q"]}, "s": 0, "u": 1, "events": []})");
  const auto d = run({"render", "--model", dpath.string()});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.out.find("class=\"arrow\""), std::string::npos);

  const auto k = run({"render", "--model", "krone", "--seed", "2"});
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_NE(k.out.find("<svg"), std::string::npos);

  EXPECT_EQ(run({"render", "--model", "siegmund"}).code, 2);
  EXPECT_EQ(run({"render", "--model", "coop", "--sites", "3"}).code, 1);
}

TEST(Cli, OutFile) {
  const auto path = scratch("classify.json");
  fs::remove(path);
  const auto r = run({"classify", "--model", "voter", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(parse_json(read_file(path.string()))["model"], "voter");
}

TEST(Cli, ClosureCache) {
  const auto dir = scratch("cache");
  fs::remove_all(dir);
  fs::create_directories(dir);
  ::setenv("ORDERDUAL_CACHE", dir.c_str(), 1);
  const auto first = run({"dualize", "--model", "coop", "--sites", "3"});
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.path().filename().string().rfind("closure-", 0) == 0;
  const auto second = run({"dualize", "--model", "coop", "--sites", "3"});
  ::unsetenv("ORDERDUAL_CACHE");
  EXPECT_EQ(files, 1u);
  EXPECT_EQ(first.code, 0);
  EXPECT_EQ(second.out, first.out);
}
