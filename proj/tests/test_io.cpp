#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <string>

#include <json.hpp>

#include "iplan/decomposition.hpp"
#include "iplan/instance.hpp"
#include "iplan/solution_io.hpp"

using namespace iplan;

namespace {

PlanningInstance load(const char* name) {
  std::ifstream in(std::string(IPLAN_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return parse_instance(j);
}

}  // namespace

TEST_CASE("solution json carries the plan") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult r = run(inst, Algorithm::A1);
  REQUIRE(r.converged);
  const nlohmann::json j = nlohmann::json::parse(solution_json(inst, r));
  CHECK(j.at("instance") == "micro");
  CHECK(j.at("algorithm") == "a1");
  CHECK(j.at("converged") == true);
  CHECK(j.at("audit_pass") == true);
  CHECK(j.at("investments").at("PV1") == true);
  CHECK(j.at("total_cost").get<double>() == doctest::Approx(r.total_cost));
  CHECK(j.at("p_grid_kw").size() == inst.days.size());
  CHECK(j.at("p_grid_kw")[0].size() == static_cast<std::size_t>(inst.hours()));
  CHECK(j.at("fleet").at("p_base_kw").get<double>() == doctest::Approx(450.0));
}

TEST_CASE("costs json components sum to the total") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult r = run(inst, Algorithm::A1);
  REQUIRE(r.converged);
  const nlohmann::json j = nlohmann::json::parse(costs_json(r));
  const double sum = j.at("investment").get<double>() + j.at("operational").get<double>() +
                     j.at("shift_penalty").get<double>() +
                     j.at("disconnection_penalty").get<double>() +
                     j.at("islanding_penalty").get<double>();
  CHECK(j.at("total").get<double>() == doctest::Approx(sum).epsilon(1e-9));
}

TEST_CASE("metrics csv has one row per day-hour plus header") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult r = run(inst, Algorithm::A1);
  REQUIRE(r.converged);
  const std::string csv = metrics_csv(r);
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + inst.days.size() * static_cast<std::size_t>(inst.hours()));
  CHECK(csv.rfind("day,hour,p_grid_kw,nadir_hz,rocof_hz_s,qss_hz,pass", 0) == 0);
  // All audited hours pass for this instance.
  CHECK(csv.find(",0\n") == std::string::npos);
}

TEST_CASE("iterations jsonl is one record per iteration") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult r = run(inst, Algorithm::A1);
  REQUIRE(r.converged);
  const std::string txt = iterations_jsonl(r);
  std::size_t lines = 0;
  for (char c : txt)
    if (c == '\n') ++lines;
  CHECK(lines == r.iterations.size());
  std::size_t pos = 0;
  while (pos < txt.size()) {
    const std::size_t e = txt.find('\n', pos);
    const nlohmann::json row = nlohmann::json::parse(txt.substr(pos, e - pos));
    CHECK(row.contains("iter"));
    CHECK(row.contains("master_objective"));
    CHECK(row.contains("violations"));
    CHECK(row.contains("cuts_added"));
    CHECK(row.contains("wall_ms"));
    pos = e + 1;
  }
}

TEST_CASE("deterministic artifacts are byte-identical across runs") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult r1 = run(inst, Algorithm::A1);
  const PlanResult r2 = run(inst, Algorithm::A1);
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  CHECK(solution_json(inst, r1) == solution_json(inst, r2));
  CHECK(costs_json(r1) == costs_json(r2));
  CHECK(metrics_csv(r1) == metrics_csv(r2));
}
