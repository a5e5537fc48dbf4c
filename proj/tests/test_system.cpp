#include <doctest.h>

#include <set>

#include "hicarbon/error.hpp"
#include "hicarbon/system.hpp"
#include "support.hpp"

using namespace hicarbon;
using nlohmann::json;

namespace {

SystemSpec load(const std::string& name, const TechDatabase& db) {
  return load_system(testsupport::data_path("systems/" + name + ".json"), db);
}

double energy_part(const CarbonReport& r, const TechDatabase& db) {
  double e = 0;
  for (const auto& c : r.chiplets) {
    const ProcessParams& p = lookup(db, c.node);
    e += p.eta_eq * db.fab.c_mfg_src * p.epa * (c.mfg.area / 100) / c.mfg.yield;
  }
  return e;
}

}  // namespace

TEST_SUITE("system") {

TEST_CASE("report total is the sum of its terms") {
  TechDatabase db = testsupport::default_db();
  for (const char* name : {"ga102", "ga102_4c", "a15_4c", "tigerlake_3c", "emr_2c", "emr_4c"}) {
    SystemSpec spec = load(name, db);
    for (auto arch : {Architecture::rdl_fanout, Architecture::silicon_bridge,
                      Architecture::passive_interposer, Architecture::active_interposer,
                      Architecture::monolithic}) {
      spec.package.architecture = arch;
      CarbonReport r = evaluate(spec, db);
      double sum = r.c_package + r.c_comm + r.c_des;
      for (const auto& c : r.chiplets) sum += c.mfg.carbon;
      CHECK(r.c_total == doctest::Approx(sum).epsilon(1e-15));
      CHECK(r.c_des == doctest::Approx(r.design.total_unamortized / spec.design.n_parts));
      CHECK(r.whitespace >= 0);
      CHECK(r.package_area >= r.whitespace);
      CHECK(r.bridge_count.has_value() == (arch == Architecture::silicon_bridge));
    }
  }
}

TEST_CASE("monolithic merges every block into one die") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102", db);
  SystemSpec mono = to_monolithic(spec, db);
  REQUIRE(mono.chiplets.size() == 1);
  const ProcessParams& p7 = lookup(db, "7nm");
  double area = 0;
  for (const auto& c : spec.chiplets) area += c.mtransistors / p7.density(c.type);
  CHECK(mono.chiplets[0].node == "7nm");
  CHECK(*mono.chiplets[0].width * *mono.chiplets[0].height == doctest::Approx(area));
  spec.package.architecture = Architecture::monolithic;
  CarbonReport r = evaluate(spec, db);
  CHECK(r.c_package == spec.package.c_pkg_fixed);
  CHECK(r.c_comm == 0);
  CHECK(r.chiplets.size() == 1);
  CHECK(r.chiplets[0].mfg.area == doctest::Approx(area));
}

TEST_CASE("passive routers on dies, active routers in the interposer") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102_4c", db);
  spec.package.architecture = Architecture::passive_interposer;
  CarbonReport passive = evaluate(spec, db);
  spec.package.architecture = Architecture::active_interposer;
  CarbonReport active = evaluate(spec, db);
  CHECK(passive.c_comm == 0);
  CHECK(active.c_comm > 0);
  for (std::size_t i = 0; i < spec.chiplets.size(); ++i) {
    CHECK(active.chiplets[i].mfg.area < passive.chiplets[i].mfg.area);
    CHECK(active.chiplets[i].mfg.carbon < passive.chiplets[i].mfg.carbon);
  }
}

TEST_CASE("split replaces the logic block by equal pieces") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102", db);
  CHECK(split_logic(spec, 1).chiplets.size() == spec.chiplets.size());
  SystemSpec two = split_logic(spec, 2);
  REQUIRE(two.chiplets.size() == 4);
  CHECK(two.chiplets[0].name == "logic0");
  CHECK(two.chiplets[1].name == "logic1");
  CHECK(two.chiplets[0].mtransistors == doctest::Approx(spec.chiplets[0].mtransistors / 2));
  CHECK_FALSE(two.logic_block.has_value());
  CHECK_THROWS_AS(split_logic(spec, 0), ValidationError);

  spec.chiplets[0].mtransistors = 1000;
  spec.connectivity = {false, {{"logic", "memory"}, {"memory", "analog"}}};
  spec.design.reuse = {"logic"};
  SystemSpec three = split_logic(spec, 3);
  CHECK(three.chiplets[2].mtransistors == doctest::Approx(1000.0 / 3));
  std::set<std::pair<std::string, std::string>> pairs(three.connectivity.pairs.begin(),
                                                      three.connectivity.pairs.end());
  CHECK(pairs.contains({"logic0", "memory"}));
  CHECK(pairs.contains({"logic0", "logic1"}));
  CHECK(pairs.contains({"logic1", "logic2"}));
  CHECK(three.design.reuse == std::set<std::string, std::less<>>{"logic0", "logic1", "logic2"});
}

TEST_CASE("explicit links that cannot touch are infeasible") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102", db);
  spec.package.architecture = Architecture::silicon_bridge;
  spec.connectivity = {false, {{"logic", "memory"}, {"logic", "analog"}, {"memory", "analog"}}};
  SystemSpec split = split_logic(spec, 8);
  try {
    evaluate(split, db);
    FAIL("expected infeasible");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).rfind("packaging: ", 0) == 0);
  }
}

TEST_CASE("labels use logic, analog, memory order") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102", db);
  CHECK(config_label(spec, db) == "(7,14,10)");
  SystemSpec logic_only = load("logic500", db);
  CHECK(config_label(logic_only, db) == "(7,-,-)");
}

TEST_CASE("sweep enumerates the full grid in canonical order") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102", db);
  SweepSpec grid;
  for (auto t : kDesignTypes) grid.node_choices[t] = {"7", "10", "14"};
  auto entries = sweep(spec, grid, db, 4);
  REQUIRE(entries.size() == 27);
  std::set<std::string> labels;
  for (const auto& e : entries) {
    CHECK(e.status == "ok");
    labels.insert(e.label);
  }
  CHECK(labels.size() == 27);
  CHECK(entries.front().label == "(7,7,7)");
  CHECK(entries[1].label == "(7,7,10)");
  CHECK(entries[3].label == "(7,10,7)");
  CHECK(entries.back().label == "(14,14,14)");

  auto serial = sweep(spec, grid, db, 1);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(serial[i].label == entries[i].label);
    CHECK(serial[i].report->c_total == entries[i].report->c_total);
  }
}

TEST_CASE("sweep records per-point failures") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102", db);
  spec.connectivity = {false, {{"logic", "memory"}, {"logic", "analog"}, {"memory", "analog"}}};
  SweepSpec grid;
  grid.nc_range = {1, 8};
  grid.architectures = {Architecture::silicon_bridge, Architecture::rdl_fanout};
  auto entries = sweep(spec, grid, db);
  REQUIRE(entries.size() == 4);
  CHECK(entries[0].status == "ok");
  CHECK(entries[2].nc == 8);
  CHECK(entries[2].status == "infeasible");
  CHECK_FALSE(entries[2].report.has_value());
  CHECK(entries[3].status == "ok");
}

TEST_CASE("scaling every intensity scales energy terms only") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102_4c", db);
  spec.package.architecture = Architecture::rdl_fanout;
  CarbonReport base = evaluate(spec, db);
  TechDatabase scaled = db;
  const double k = 0.25;
  scaled.fab = {db.fab.c_mfg_src * k, db.fab.c_pkg_src * k, db.fab.c_des_src * k};
  CarbonReport r = evaluate(spec, scaled);
  CHECK(r.c_package == doctest::Approx(k * base.c_package).epsilon(1e-12));
  CHECK(r.c_des == doctest::Approx(k * base.c_des).epsilon(1e-12));
  double e = energy_part(base, db);
  CHECK(r.c_mfg() - base.c_mfg() == doctest::Approx((k - 1) * e).epsilon(1e-10));
  CHECK(energy_part(r, scaled) == doctest::Approx(k * e).epsilon(1e-12));
}

TEST_CASE("large systems beat their monolithic counterpart") {
  TechDatabase db = testsupport::default_db();
  for (const char* name : {"ga102_4c", "emr_2c", "emr_4c"}) {
    SystemSpec spec = load(name, db);
    spec.package.architecture = Architecture::monolithic;
    double mono = evaluate(spec, db).c_total;
    double best = mono;
    for (auto arch : {Architecture::rdl_fanout, Architecture::silicon_bridge,
                      Architecture::passive_interposer, Architecture::active_interposer}) {
      spec.package.architecture = arch;
      best = std::min(best, evaluate(spec, db).c_total);
    }
    CHECK_MESSAGE(best < mono, name);
  }
}

TEST_CASE("parse errors and validation") {
  TechDatabase db = testsupport::default_db();
  json doc = json::parse(R"({"name": "t", "chiplets": [
      {"name": "a", "type": "logic", "mtransistors": 100, "node": "7"}]})");
  SystemSpec ok = parse_system(doc, db);
  CHECK(ok.chiplets[0].node == "7nm");
  CHECK(ok.package.spacing == db.packaging_defaults.spacing);

  json bad = doc;
  bad["chiplets"][0]["node"] = "3nm";
  CHECK_THROWS_AS(parse_system(bad, db), ValidationError);
  bad = doc;
  bad["chiplets"][0]["mtransistors"] = -1;
  CHECK_THROWS_AS(parse_system(bad, db), ValidationError);
  bad = doc;
  bad["chiplets"].push_back(doc["chiplets"][0]);
  CHECK_THROWS_AS(parse_system(bad, db), ValidationError);
  bad = doc;
  bad["chiplets"][0]["width"] = 1;
  bad["chiplets"][0]["height"] = 1;
  CHECK_THROWS_AS(parse_system(bad, db), ValidationError);
  bad = doc;
  bad["connectivity"] = json::array({json::array({"a", "z"})});
  CHECK_THROWS_AS(parse_system(bad, db), ValidationError);
  bad = doc;
  bad["colour"] = "red";
  CHECK_THROWS_AS(parse_system(bad, db), ParseError);
  bad = doc;
  bad["chiplets"][0]["type"] = "rf";
  CHECK_THROWS_AS(parse_system(bad, db), ParseError);
  bad = doc;
  bad["logic_block"] = "nope";
  CHECK_THROWS_AS(parse_system(bad, db), ValidationError);
  bad = doc;
  bad["design"] = {{"n_parts", 0}};
  CHECK_THROWS_AS(parse_system(bad, db), ValidationError);

  try {
    load_system("/nonexistent/sys.json", db);
    FAIL("expected error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/sys.json") != std::string::npos);
  }
}

TEST_CASE("system round trip through json") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102", db);
  SystemSpec again = parse_system(to_json(spec), db);
  CHECK(to_json(again) == to_json(spec));
  CHECK(evaluate(again, db).c_total == evaluate(spec, db).c_total);
}

TEST_CASE("errors name the failing stage") {
  TechDatabase db = testsupport::default_db();
  SystemSpec spec = load("ga102", db);
  spec.chiplets[0].node = "5nm";
  try {
    evaluate(spec, db);
    FAIL("expected error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).rfind("validate: ", 0) == 0);
  }
}

}  // TEST_SUITE
