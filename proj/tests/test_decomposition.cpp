#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "iplan/decomposition.hpp"
#include "iplan/instance.hpp"
#include "iplan/simulate.hpp"

using namespace iplan;

namespace {

PlanningInstance load(const char* name) {
  std::ifstream in(std::string(IPLAN_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return parse_instance(j);
}

constexpr double kRs = 100.0 / 3.0;
constexpr double kFs = 35.0 / 3.0;

// SG1 (280 kW) + fixed PV3 (350 kW): 630 kW, overdamped.
constexpr double kDA = 0.4, kMA = 56.0 / 9.0;
// SG1 + VSM PV1 (350 kW) + PV3: 980 kW, still overdamped.
constexpr double kDB = 567.0 / 980.0, kMB = 9.0;

SubFrozen frozen_b(double pgrid) {
  SubFrozen fr;
  fr.pgrid = pgrid;
  fr.bM = 8820;
  fr.bD = 567;
  fr.bRs = kRs * 280;
  fr.bFs = kFs * 280;
  fr.p_base = 980;
  fr.ps_base = 280;
  fr.z = {1, 0, 1, 0, 1};
  return fr;
}

}  // namespace

TEST_CASE("exact nadir gain agrees with the oscillatory form when underdamped") {
  CHECK(exact_nadir_gain(0.9, kRs, kFs, 14.0, 8.0) ==
        doctest::Approx(nadir_gain_at(0.9, kRs, kFs, 14.0, 8.0)).epsilon(1e-14));
  CHECK(exact_nadir_gain(0.9, kRs, kFs, 14.0, 8.0) ==
        doctest::Approx(16.723116945855576).epsilon(1e-12));
}

TEST_CASE("exact nadir gain, overdamped frozen values") {
  CHECK(exact_nadir_gain(kDA, kRs, kFs, kMA, 8.0) ==
        doctest::Approx(14.60874771430164).epsilon(1e-12));
  CHECK(exact_nadir_gain(kDB, kRs, kFs, kMB, 8.0) ==
        doctest::Approx(15.44102165005265).epsilon(1e-12));
  // Degenerate regimes fall back to the stiffness (pure QSS).
  CHECK(exact_nadir_gain(5.0, 10.0, 0.0, 0.0, 8.0) == doctest::Approx(15.0));
}

TEST_CASE("overdamped gain cross-checked against simulation") {
  AggregateParams a;
  a.D = kDB;
  a.R_s = kRs;
  a.F_s = kFs;
  a.M = kMB;
  const SimTrace tr = simulate(a, 8.0, 0.2, 200.0, 1e-3);
  const FrequencyMetrics m = trace_metrics(tr);
  const double gain_sim = 0.2 / (std::abs(m.nadir_hz) / 50.0);
  CHECK(gain_sim == doctest::Approx(15.44102165005265).epsilon(1e-7));
}

TEST_CASE("frozen bounds for the 980 kW fleet") {
  AggregateParams a;
  a.D = kDB;
  a.R_s = kRs;
  a.F_s = kFs;
  a.M = kMB;
  a.breve_M = 8820;
  a.p_base_kw = 980;
  SecurityLimits lim;  // 0.6 / 2.0 / 0.2 at 50 Hz
  const FrozenBounds fb = frozen_bounds(a, 8.0, lim);
  CHECK(fb.p_rocof_kw == doctest::Approx(352.8).epsilon(1e-12));
  CHECK(fb.p_qss_kw == doctest::Approx(132.9346666666667).epsilon(1e-12));
  CHECK(fb.p_nadir_kw == doctest::Approx(181.58641460461914).epsilon(1e-10));
  CHECK(fb.binding() == doctest::Approx(132.9346666666667));

  const FrequencyMetrics at_cap = exact_metrics(a, 8.0, fb.binding(), 50.0);
  CHECK(std::abs(at_cap.qss_hz) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(at_cap.nadir_hz) < 0.6);
  CHECK(std::abs(at_cap.rocof_hz_s) < 2.0);
}

TEST_CASE("A1 sub-problem: slack, duals and cut behave like a projection") {
  const TaylorPoint tp = gradient_of(
      [](double D, double Rs, double Fs, double M) {
        return exact_nadir_gain(D, Rs, Fs, M, 8.0);
      },
      kDB, kRs, kFs, kMB, 8.0);
  SecurityLimits lim;
  const double binding = 132.9346666666667;

  SUBCASE("violated import hour") {
    const SubFrozen fr = frozen_b(200.0);
    const SubResult sr = solve_sub(build_sub_a1(fr, tp, lim));
    REQUIRE(sr.status == opt::SolveStatus::Optimal);
    CHECK(sr.slack == doctest::Approx(200.0 - binding).epsilon(1e-9));
    CHECK(sr.lambda == doctest::Approx(1.0));
    // More damping or droop response relaxes the constraint.
    CHECK(sr.pi < 1e-12);
    CHECK(sr.mu < 1e-12);

    const FeasibilityCut cut = make_cut(FeasibilityCut::Kind::A1, fr, sr);
    const double breve[4] = {fr.bM, fr.bD, fr.bRs, fr.bFs};
    CHECK(cut.lhs(fr.pgrid, breve, fr.z) == doctest::Approx(sr.slack).epsilon(1e-9));
    CHECK(cut.lhs(fr.pgrid - sr.slack, breve, fr.z) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(cut.lhs(binding, breve, fr.z) == doctest::Approx(0.0).epsilon(1e-7));
  }

  SUBCASE("violated export hour is symmetric") {
    const SubFrozen fr = frozen_b(-200.0);
    const SubResult sr = solve_sub(build_sub_a1(fr, tp, lim));
    REQUIRE(sr.status == opt::SolveStatus::Optimal);
    CHECK(sr.slack == doctest::Approx(200.0 - binding).epsilon(1e-9));
    CHECK(sr.lambda == doctest::Approx(-1.0));
  }

  SUBCASE("secure hour has zero slack") {
    const SubFrozen fr = frozen_b(80.0);
    const SubResult sr = solve_sub(build_sub_a1(fr, tp, lim));
    REQUIRE(sr.status == opt::SolveStatus::Optimal);
    CHECK(sr.slack == doctest::Approx(0.0));
  }
}

TEST_CASE("A1 and A2 sub-problems agree at the same frozen point") {
  const PlanningInstance inst = load("toy.json");
  const TaylorPoint tp = gradient_of(
      [](double D, double Rs, double Fs, double M) {
        return exact_nadir_gain(D, Rs, Fs, M, 8.0);
      },
      kDB, kRs, kFs, kMB, 8.0);
  SecurityLimits lim;
  for (double pg : {200.0, -170.0, 300.0}) {
    SubFrozen fr = frozen_b(pg);
    fr.z = {1, 0, 1, 0, 1};
    const SubResult s1 = solve_sub(build_sub_a1(fr, tp, lim));
    const SubResult s2 = solve_sub(build_sub_a2(fr, inst, tp, lim));
    REQUIRE(s1.status == opt::SolveStatus::Optimal);
    REQUIRE(s2.status == opt::SolveStatus::Optimal);
    CHECK(s1.slack == doctest::Approx(s2.slack).epsilon(1e-9));
    CHECK(s1.lambda == doctest::Approx(s2.lambda));
    // The A2 z-dual of a unit equals the chained A1 aggregate duals.
    const Unit& pv1 = inst.units[2];  // VSM
    const double chained =
        s1.alpha * pv1.inertia_s * pv1.capacity_kw + s1.pi * pv1.damping * pv1.capacity_kw;
    CHECK(s2.z_duals[2] == doctest::Approx(chained).epsilon(1e-7));
  }
}

TEST_CASE("micro: A1 invests the VSM unit and passes the exact audit") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult r = run(inst, Algorithm::A1);
  REQUIRE(r.converged);
  CHECK(r.z == std::vector<double>{1, 1, 1});  // SG1, PV1 invested, PV3
  CHECK(r.audit_pass);
  CHECK(r.fleet.p_base_kw == doctest::Approx(450.0));
  const double bind = frozen_bounds(r.fleet, inst.turbine_t, inst.limits).binding();
  CHECK(bind == doctest::Approx(50.4));
  for (const auto& day : r.pgrid)
    for (double pg : day) CHECK(std::abs(pg) <= bind + 1e-3);
}

TEST_CASE("micro: A2 reaches the same plan as A1") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult r1 = run(inst, Algorithm::A1);
  const PlanResult r2 = run(inst, Algorithm::A2);
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  CHECK(r1.z == r2.z);
  CHECK(r1.total_cost == doctest::Approx(r2.total_cost).epsilon(1e-8));
}

TEST_CASE("micro: conservative baseline is never cheaper") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult a0 = run_a0(inst);
  const PlanResult a1 = run(inst, Algorithm::A1);
  REQUIRE(a0.converged);
  REQUIRE(a1.converged);
  CHECK(a0.total_cost >= a1.total_cost - 1e-7);
  CHECK(a0.iterations.size() >= a1.iterations.size());
  CHECK(a0.audit_pass);
}

TEST_CASE("micro: exhaustive oracle agrees with the decomposition") {
  const PlanningInstance inst = load("micro.json");
  const PlanResult ex = run_exhaustive(inst);
  const PlanResult a1 = run(inst, Algorithm::A1);
  REQUIRE(ex.converged);
  REQUIRE(a1.converged);
  CHECK(ex.z == a1.z);
  CHECK(std::abs(ex.total_cost - a1.total_cost) <=
        1e-6 * (1 + std::abs(ex.total_cost)));
}

TEST_CASE("plan() dispatches all four engines") {
  const PlanningInstance inst = load("micro.json");
  for (Algorithm alg :
       {Algorithm::A0, Algorithm::A1, Algorithm::A2, Algorithm::Exhaustive}) {
    const PlanResult r = plan(inst, alg);
    CHECK(r.converged);
    CHECK(r.algorithm == algorithm_name(alg));
  }
}

TEST_CASE("exhaustive rejects oversized candidate sets") {
  PlanningInstance inst = load("micro.json");
  for (int i = 0; i < 13; ++i) {
    Unit u = inst.units[1];
    u.id = "C" + std::to_string(i);
    u.existing = false;
    u.invest_cost = 1000;
    inst.units.push_back(u);
  }
  CHECK_THROWS_AS(run_exhaustive(inst), TooManyCandidatesError);
}
