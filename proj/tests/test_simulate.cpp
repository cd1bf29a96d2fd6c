#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iplan/freq.hpp"
#include "iplan/simulate.hpp"

using namespace iplan;

namespace {

AggregateParams sg1() {
  FleetComposition f;
  f.sync_units.push_back({{14.0, 0.9, 1.0, 0.03, 0.35, 280.0}, true});
  return aggregate(f);
}

}  // namespace

TEST_CASE("simulation reproduces the closed-form metrics") {
  const AggregateParams a = sg1();
  const SecondOrderCoeffs c = coefficients(a, 8.0);
  const SimTrace tr = simulate(a, 8.0, 0.2, 120.0, 1e-3);
  const FrequencyMetrics sim = trace_metrics(tr);
  const FrequencyMetrics cf = metrics(a, c, 0.2);
  CHECK(sim.nadir_hz == doctest::Approx(cf.nadir_hz).epsilon(1e-6));
  CHECK(sim.rocof_hz_s == doctest::Approx(cf.rocof_hz_s).epsilon(1e-9));
  CHECK(sim.qss_hz == doctest::Approx(cf.qss_hz).epsilon(1e-6));
}

TEST_CASE("simulation matches the full trajectory, not just the extremes") {
  const AggregateParams a = sg1();
  const SecondOrderCoeffs c = coefficients(a, 8.0);
  const SimTrace tr = simulate(a, 8.0, 0.2, 30.0, 1e-3);
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 25.0}) {
    const std::size_t k = static_cast<std::size_t>(std::llround(t / tr.dt));
    CHECK(tr.freq_hz[k] == doctest::Approx(trajectory(a, c, 0.2, t)).epsilon(1e-7));
  }
}

TEST_CASE("initial derivative equals the analytic RoCoF") {
  const AggregateParams a = sg1();
  const SimTrace tr = simulate(a, 8.0, 0.35, 30.0, 1e-3);
  CHECK(tr.deriv_hz_s.front() == doctest::Approx(-1.25).epsilon(1e-12));
  // Finite-difference on the first samples agrees too.
  const double fd = (tr.freq_hz[1] - tr.freq_hz[0]) / tr.dt;
  CHECK(fd == doctest::Approx(-1.25).epsilon(1e-3));
}

TEST_CASE("disturbance sign symmetry") {
  const AggregateParams a = sg1();
  const SimTrace up = simulate(a, 8.0, -0.2, 60.0, 1e-3);
  const SimTrace dn = simulate(a, 8.0, 0.2, 60.0, 1e-3);
  const FrequencyMetrics mu = trace_metrics(up), md = trace_metrics(dn);
  CHECK(mu.nadir_hz == doctest::Approx(-md.nadir_hz).epsilon(1e-12));
  CHECK(mu.qss_hz == doctest::Approx(-md.qss_hz).epsilon(1e-12));
}

TEST_CASE("zero disturbance stays at nominal") {
  const SimTrace tr = simulate(sg1(), 8.0, 0.0, 20.0, 1e-3);
  const FrequencyMetrics m = trace_metrics(tr);
  CHECK(m.nadir_hz == doctest::Approx(0.0));
  CHECK(m.rocof_hz_s == doctest::Approx(0.0));
  CHECK(m.qss_hz == doctest::Approx(0.0));
}

TEST_CASE("overdamped fleets integrate fine (no oscillatory assumption)") {
  FleetComposition f;
  f.sync_units.push_back({{14.0, 0.9, 1.0, 0.03, 0.35, 280.0}, true});
  f.vsm_cigs.push_back({{14.0, 0.9, 350.0}, true});
  f.fixed_cigs.push_back({350.0, true});
  const AggregateParams a = aggregate(f);
  const SimTrace tr = simulate(a, 8.0, 0.2, 120.0, 1e-3);
  const FrequencyMetrics m = trace_metrics(tr);
  CHECK(m.qss_hz == doctest::Approx(50.0 * -0.2 / (a.D + a.R_s)).epsilon(1e-6));
  CHECK(std::abs(m.nadir_hz) >= std::abs(m.qss_hz));
}

TEST_CASE("guard rails") {
  const AggregateParams a = sg1();
  CHECK_THROWS_AS(simulate(a, 8.0, 0.2, 30.0, 0.05), StepTooLargeError);
  CHECK_THROWS_AS(simulate(a, 8.0, 0.2, -1.0, 1e-3), InputError);
  AggregateParams bad = a;
  bad.M = 0;
  CHECK_THROWS_AS(simulate(bad, 8.0, 0.2), ZeroInertiaError);
  // Horizon too short to settle.
  const SimTrace tr = simulate(a, 8.0, 0.2, 1.0, 1e-3);
  CHECK_THROWS_AS(trace_metrics(tr), NotSettledError);
}
