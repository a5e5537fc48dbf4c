#include <doctest.h>

#include "hicarbon/error.hpp"
#include "hicarbon/manufacturing.hpp"
#include "support.hpp"

using namespace hicarbon;
using testsupport::big;

namespace {

ProcessParams example_params() {
  ProcessParams p;
  p.d0 = 0.1;
  p.alpha = 3;
  p.dt[DesignType::logic] = 100;
  p.eta_eq = 1;
  p.epa = 2.0;
  p.c_gas = 300;
  p.c_material = 500;
  return p;
}

}  // namespace

TEST_SUITE("manufacturing") {

TEST_CASE("die area is transistors over density plus extras") {
  ProcessParams p = example_params();
  Chiplet c{"a", DesignType::logic, 1000, "7nm"};
  CHECK(die_area(c, p) == doctest::Approx(10.0).epsilon(1e-15));
  c.extra_area = 0.5;
  CHECK(die_area(c, p) == doctest::Approx(10.5).epsilon(1e-15));
  c.extra_area = 0;
  p.dt[DesignType::logic] = 50;
  CHECK(die_area(c, p) == doctest::Approx(20.0).epsilon(1e-15));
  c.width = 4;
  c.height = 6;
  CHECK(core_area(c, p) == 24);
}

TEST_CASE("yield examples") {
  CHECK(die_yield(0, 0.1, 3) == 1.0);
  big y1 = testsupport::oracle::yield(100, big("0.1"), 3);
  CHECK(testsupport::rel_err(die_yield(100, 0.1, 3), y1) < 1e-14);
  CHECK(die_yield(100, 0.1, 3) == doctest::Approx(0.9063).epsilon(1e-4));
  CHECK(die_yield(750, 0.2, 3) == doctest::Approx(1.0 / 3.375).epsilon(1e-14));
}

TEST_CASE("cfpa examples") {
  ProcessParams p = example_params();
  double y = die_yield(100, p);
  CHECK(cfpa(y, p, 700.0) == doctest::Approx(2200.0 / y).epsilon(1e-14));
  CHECK(cfpa(y, p, 700.0) == doctest::Approx(2427.5).epsilon(1e-4));
  CHECK(cfpa(1.0, p, 700.0) == doctest::Approx(2200.0));
  CHECK(cfpa(y, p, 0.0) == doctest::Approx(882.7).epsilon(1e-4));
}

TEST_CASE("one square centimetre die composes area, yield and cfpa") {
  auto db = testsupport::single_node_db(example_params());
  Chiplet c{"a", DesignType::logic, 10000, "7nm"};
  MfgResult r = chiplet_mfg_cfp(c, db);
  CHECK(r.area == doctest::Approx(100.0));
  CHECK(r.yield == doctest::Approx(die_yield(100, 0.1, 3)));
  CHECK(r.carbon == doctest::Approx(2427.5).epsilon(1e-4));
  CHECK(r.carbon == doctest::Approx(r.cfpa * r.area / 100).epsilon(1e-12));
}

TEST_CASE("unknown node propagates") {
  auto db = testsupport::single_node_db(example_params());
  Chiplet c{"a", DesignType::logic, 100, "5nm"};
  CHECK_THROWS_AS(chiplet_mfg_cfp(c, db), UnknownNodeError);
  c.node = "7nm";
  c.type = DesignType::memory;
  CHECK_THROWS_AS(chiplet_mfg_cfp(c, db), ValidationError);
}

TEST_CASE("property: yield strictly decreasing in area and d0") {
  testsupport::Gen g(11);
  for (int i = 0; i < 500; ++i) {
    double a = g.uniform(1, 900), b = a + g.uniform(0.5, 300);
    double d = g.uniform(0.07, 0.3), e = d + g.uniform(0.001, 0.1);
    CHECK(die_yield(b, d, 3) < die_yield(a, d, 3));
    CHECK(die_yield(a, e, 3) < die_yield(a, d, 3));
    CHECK(die_yield(a, d, 3) > 0);
    CHECK(die_yield(a, d, 3) < 1);
  }
}

TEST_CASE("property: carbon is superlinear in area") {
  testsupport::Gen g(12);
  for (int i = 0; i < 300; ++i) {
    ProcessParams p = g.process();
    auto db = testsupport::single_node_db(p, "7nm", g.uniform(30, 700));
    double d = p.density(DesignType::logic);
    double a1 = g.uniform(5, 400), a2 = a1 * g.uniform(1.01, 4);
    Chiplet c1{"a", DesignType::logic, a1 * d, "7nm"};
    Chiplet c2{"b", DesignType::logic, a2 * d, "7nm"};
    double r1 = chiplet_mfg_cfp(c1, db).carbon;
    double r2 = chiplet_mfg_cfp(c2, db).carbon;
    CHECK(r2 / r1 > a2 / a1);
  }
}

TEST_CASE("property: scaling the grid intensity moves only the energy term") {
  testsupport::Gen g(13);
  for (int i = 0; i < 300; ++i) {
    ProcessParams p = g.process();
    double y = die_yield(g.uniform(1, 800), p);
    double c = g.uniform(30, 700), k = g.uniform(0.1, 5);
    double diff = cfpa(y, p, k * c) - cfpa(y, p, c);
    double expect = (k - 1) * p.eta_eq * c * p.epa / y;
    CHECK(diff == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("property: splitting a die into equal parts lowers total carbon") {
  testsupport::Gen g(14);
  for (int i = 0; i < 200; ++i) {
    ProcessParams p = g.process();
    auto db = testsupport::single_node_db(p);
    double mtr = g.uniform(50, 800) * p.density(DesignType::logic);
    double whole = chiplet_mfg_cfp({"w", DesignType::logic, mtr, "7nm"}, db).carbon;
    for (int n : {2, 4, 8}) {
      double part = chiplet_mfg_cfp({"p", DesignType::logic, mtr / n, "7nm"}, db).carbon;
      CHECK(n * part < whole);
    }
  }
}

TEST_CASE("property: extra area enters yield") {
  auto db = testsupport::single_node_db(example_params());
  Chiplet c{"a", DesignType::logic, 5000, "7nm"};
  MfgResult base = chiplet_mfg_cfp(c, db);
  c.extra_area = 5;
  MfgResult bigger = chiplet_mfg_cfp(c, db);
  CHECK(bigger.yield < base.yield);
  CHECK(bigger.carbon > base.carbon * 55.0 / 50.0);
}

}  // TEST_SUITE
