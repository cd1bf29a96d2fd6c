#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "iplan/instance.hpp"

using namespace iplan;
using nlohmann::json;

namespace {

json load_fixture(const char* name) {
  std::ifstream in(std::string(IPLAN_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("toy fixture parses with the expected structure") {
  const PlanningInstance inst = parse_instance(load_fixture("toy.json"));
  CHECK(inst.name == "toy");
  CHECK(inst.buses.size() == 4);
  CHECK(inst.lines.size() == 3);
  CHECK(inst.units.size() == 5);
  CHECK(inst.days.size() == 2);
  CHECK(inst.hours() == 6);
  CHECK(inst.grid.bus == "b1");
  CHECK(inst.grid.rating_kw == doctest::Approx(500.0));
  CHECK(inst.grid.import_tariff.size() == 6);
  CHECK(inst.grid.import_tariff[0] == doctest::Approx(0.30));
  CHECK(inst.grid.export_tariff[3] == doctest::Approx(0.05));
  CHECK(inst.limits.qss_bound_hz == doctest::Approx(0.2));
  CHECK(inst.days[0].weight_days + inst.days[1].weight_days == doctest::Approx(365.0));

  CHECK(inst.units[0].id == "SG1");
  CHECK(inst.units[0].existing);
  CHECK(inst.units[0].kind == UnitKind::Sg);
  CHECK_FALSE(inst.units[0].is_pv);
  CHECK(inst.units[2].kind == UnitKind::Vsm);
  CHECK(inst.units[2].is_pv);
  CHECK(inst.units[4].kind == UnitKind::Fixed);
  CHECK(inst.candidate_indices() == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("scalar tariff expands to an hourly profile") {
  json j = load_fixture("micro.json");
  const PlanningInstance inst = parse_instance(j);
  CHECK(inst.hours() == 4);
  CHECK(inst.grid.import_tariff == std::vector<double>(4, 0.30));
}

TEST_CASE("fleet_for honors commitments, existing units always on") {
  const PlanningInstance inst = parse_instance(load_fixture("toy.json"));
  std::vector<double> z(inst.units.size(), 0.0);
  AggregateParams a = aggregate(fleet_for(inst, z));
  CHECK(a.p_base_kw == doctest::Approx(280.0));  // SG1 only
  z[2] = 1.0;                                    // PV1 (vsm)
  z[4] = 1.0;                                    // PV3 (fixed)
  a = aggregate(fleet_for(inst, z));
  CHECK(a.p_base_kw == doctest::Approx(980.0));
  CHECK(a.breve_M == doctest::Approx(14.0 * 280 + 14.0 * 350));
  CHECK(a.p_s_base_kw == doctest::Approx(280.0));
}

TEST_CASE("malformed instances are rejected with the offending path") {
  json base = load_fixture("toy.json");

  json j = base;
  j["units"][1]["bus"] = "nope";
  CHECK_THROWS_WITH_AS(parse_instance(j), doctest::Contains("/units/1"), InputError);

  j = base;
  j["representative_days"][0]["weight_days"] = 100;  // sum != 365
  CHECK_THROWS_WITH_AS(parse_instance(j), doctest::Contains("365"), InputError);

  j = base;
  j["representative_days"][1]["pv_availability"] = {0.0, 0.5};  // wrong hour count
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = base;
  j["representative_days"][0]["demand_kw"]["b2"][2] = -5;
  CHECK_THROWS_WITH_AS(parse_instance(j), doctest::Contains("negative"), InputError);

  j = base;
  j["units"][1].erase("invest_cost");  // candidate without a cost
  CHECK_THROWS_WITH_AS(parse_instance(j), doctest::Contains("invest_cost"), InputError);

  j = base;
  j["units"][0]["id"] = "SG2";  // duplicate
  CHECK_THROWS_WITH_AS(parse_instance(j), doctest::Contains("duplicate"), InputError);

  j = base;
  j["grid"]["rating_kw"] = 0;
  CHECK_THROWS_WITH_AS(parse_instance(j), doctest::Contains("rating"), InputError);

  j = base;
  for (auto& u : j["units"]) u["existing"] = false;
  for (auto& u : j["units"]) u["invest_cost"] = 1000;
  CHECK_THROWS_WITH_AS(parse_instance(j), doctest::Contains("existing"), InputError);
}

TEST_CASE("day clustering: weights sum to 365 and profiles stay in range") {
  std::vector<RawDay> raw;
  for (int i = 0; i < 10; ++i) {
    RawDay d;
    const double level = (i < 6) ? 100.0 + i : 200.0 + i;
    d.demand_kw["b1"] = {level, level + 10, level + 20};
    d.pv_availability = {0.0, (i < 6) ? 0.8 : 0.3, 0.1};
    raw.push_back(d);
  }
  const std::vector<RepDay> reps = cluster_days(raw, 2, 9);
  REQUIRE(reps.size() == 2);
  double wsum = 0;
  for (const auto& r : reps) {
    wsum += r.weight_days;
    REQUIRE(r.pv_availability.size() == 3);
    for (double v : r.pv_availability) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    REQUIRE(r.demand_kw.count("b1"));
  }
  CHECK(wsum == doctest::Approx(365.0));
  // The 6/4 split should be recovered: weights 6*36.5 and 4*36.5.
  const double w0 = std::min(reps[0].weight_days, reps[1].weight_days);
  const double w1 = std::max(reps[0].weight_days, reps[1].weight_days);
  CHECK(w0 == doctest::Approx(4 * 36.5));
  CHECK(w1 == doctest::Approx(6 * 36.5));
}

TEST_CASE("day clustering is deterministic per seed") {
  std::vector<RawDay> raw;
  for (int i = 0; i < 8; ++i) {
    RawDay d;
    d.demand_kw["b1"] = {50.0 + 13 * (i % 3), 80.0 + 7 * (i % 5)};
    d.pv_availability = {0.2, 0.9};
    raw.push_back(d);
  }
  const auto a = cluster_days(raw, 3, 21);
  const auto b = cluster_days(raw, 3, 21);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].weight_days == b[i].weight_days);
    CHECK(a[i].demand_kw.at("b1") == b[i].demand_kw.at("b1"));
  }
}
