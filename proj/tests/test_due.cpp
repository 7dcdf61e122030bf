#include <doctest.h>

#include <random>

#include "due.hpp"
#include "fixtures.hpp"
#include "selftest.hpp"

using corridor::DsoSolution;
using corridor::DueSolution;
using corridor::ScheduleDelay;
using corridor::Side;

namespace {

DueSolution solve_ex1() {
  DsoSolution dso = corridor::solve_dso(fixtures::ex1(), fixtures::ex1_schedule());
  return corridor::construct_due(dso, fixtures::ex1(), fixtures::ex1_schedule());
}

}  // namespace

TEST_CASE("queue delays reproduce the price pattern exactly") {
  DsoSolution dso = corridor::solve_dso(fixtures::ex1(), fixtures::ex1_schedule());
  DueSolution due = corridor::construct_due(dso, fixtures::ex1(), fixtures::ex1_schedule());
  ScheduleDelay f = fixtures::ex1_schedule();
  CHECK(due.queue_delays[1].eval(0.0, f) == doctest::Approx(0.415384615).epsilon(1e-8));
  for (int i = 0; i < 2; ++i)
    for (double t : dso.prices[i].sample_grid(16))
      CHECK(due.queue_delays[i].eval(t, f) == dso.prices[i].eval(t, f));
  CHECK(due.rho == dso.rho);
}

TEST_CASE("flow rates follow the segment slope algebra") {
  DueSolution due = solve_ex1();
  ScheduleDelay f = fixtures::ex1_schedule();
  // late inner segment (0, 0.3077): both arrival-rate factors are 1.9
  CHECK(due.flows[0][0].eval(0.15, f) == doctest::Approx(1.9).epsilon(1e-9));
  CHECK(due.flows[1][0].eval(0.15, f) == doctest::Approx(1.9).epsilon(1e-9));
  // early inner segment (-0.6923, 0): factors 0.6
  CHECK(due.flows[0][0].eval(-0.3, f) == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(due.flows[1][0].eval(-0.3, f) == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("residual verification is clean and the margin matches the slopes") {
  DueSolution due = solve_ex1();
  corridor::ResidualReport rep =
      corridor::verify_due(due, fixtures::ex1(), fixtures::ex1_schedule());
  CHECK(rep.max_dtc <= 1e-9);
  CHECK(rep.max_queue <= 1e-9);
  CHECK(rep.max_conservation <= 1e-9);
  CHECK(rep.max_flow_negativity <= 1e-9);
  // binding margin is the early side: 1 - eta * beta^1
  CHECK(rep.min_consistency == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(rep.pass(1e-8));
}

TEST_CASE("corrupted queue pattern produces nonzero residuals") {
  DueSolution due = solve_ex1();
  due.queue_delays[0] *= 1.01;
  due.queue_prefix[0] *= 1.01;  // keep the prefix consistent with the corruption
  corridor::ResidualReport rep =
      corridor::verify_due(due, fixtures::ex1(), fixtures::ex1_schedule());
  CHECK_FALSE(rep.pass(1e-8));
  CHECK(rep.max_dtc > 1e-4);
}

TEST_CASE("construction refuses when the slope condition fails") {
  corridor::Corridor c = fixtures::ex1();
  ScheduleDelay boundary = corridor::ScheduleDelay::piecewise_linear(0.5, 0.9);
  DsoSolution dso = corridor::solve_dso(c, boundary);  // the optimum itself exists
  CHECK_THROWS_AS(corridor::construct_due(dso, c, boundary), corridor::QrpConditionViolated);
  DueSolution forced = corridor::construct_due(dso, c, boundary, true);
  CHECK_FALSE(forced.qrp.holds);
  CHECK(forced.flows[0][0].integral(boundary) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("classic single-bottleneck equilibrium") {
  corridor::Corridor c = fixtures::single();
  ScheduleDelay f = fixtures::ex1_schedule();
  DsoSolution dso = corridor::solve_dso(c, f);
  DueSolution due = corridor::construct_due(dso, c, f);
  CHECK(due.queue_delays[0].eval(0.0, f) == doctest::Approx(0.553846154).epsilon(1e-8));
  CHECK(due.total_cost == doctest::Approx(1.107692308).epsilon(1e-8));
  CHECK(corridor::total_cost_due(due, c) == doctest::Approx(due.total_cost));

  corridor::CumulativeCurves cc = corridor::cumulative_curves(due, c, f, 0);
  CHECK(cc.total_mass() == doctest::Approx(2.0).epsilon(1e-9));
  // departures run at capacity through the rush; arrivals steepen early and
  // flatten late (the classic two-slope pattern)
  double t0 = due.windows[0][0].t_minus, t1 = due.windows[0][0].t_plus;
  double mid_s = due.sigma(0, 0.5 * (t0 + t1), f);
  double rate = (cc.departures_at(mid_s + 0.05) - cc.departures_at(mid_s - 0.05)) / 0.1;
  CHECK(rate == doctest::Approx(1.0).epsilon(1e-6));
  double early_arr = due.tau(0, 0.5 * t0, f);
  double early_rate = (cc.arrivals_at(early_arr + 0.02) - cc.arrivals_at(early_arr - 0.02)) / 0.04;
  double late_arr = due.tau(0, 0.5 * t1, f);
  double late_rate = (cc.arrivals_at(late_arr + 0.02) - cc.arrivals_at(late_arr - 0.02)) / 0.04;
  CHECK(early_rate == doctest::Approx(1.0 / 0.6).epsilon(1e-5));
  CHECK(late_rate == doctest::Approx(1.0 / 1.9).epsilon(1e-5));
}

TEST_CASE("cumulative curves on the worked instance") {
  DueSolution due = solve_ex1();
  corridor::Corridor c = fixtures::ex1();
  ScheduleDelay f = fixtures::ex1_schedule();

  corridor::CumulativeCurves c1 = corridor::cumulative_curves(due, c, f, 0);
  CHECK(c1.total_mass() == doctest::Approx(6.0).epsilon(1e-9));  // everyone passes bottleneck 1
  corridor::CumulativeCurves c2 = corridor::cumulative_curves(due, c, f, 1);
  CHECK(c2.total_mass() == doctest::Approx(4.0).epsilon(1e-9));

  // departures run at mu_1 = 2 while the queue is active
  double t = 0.1;  // interior of the bottleneck-1 window, queue positive
  REQUIRE(due.queue_delays[0].eval(t, f) > 0.0);
  double s = due.sigma(0, t, f);
  double rate = (c1.departures_at(s + 0.02) - c1.departures_at(s - 0.02)) / 0.04;
  CHECK(rate == doctest::Approx(2.0).epsilon(1e-6));

  // first-in-first-out: arrivals at tau match departures at sigma
  for (double tt : {-2.0, -1.0, -0.5, 0.0, 0.4, 1.0}) {
    CHECK(c1.arrivals_at(due.tau(0, tt, f)) ==
          doctest::Approx(c1.departures_at(due.sigma(0, tt, f))).epsilon(1e-9));
    CHECK(c1.arrivals_at(due.tau(0, tt, f)) >= -1e-12);
  }

  // both curves are nondecreasing
  for (std::size_t j = 1; j < c1.mass.size(); ++j) {
    CHECK(c1.mass[j] >= c1.mass[j - 1] - 1e-12);
    CHECK(c1.arrival_time[j] >= c1.arrival_time[j - 1] - 1e-12);
    CHECK(c1.departure_time[j] >= c1.departure_time[j - 1] - 1e-12);
  }
}

TEST_CASE("residuals stay clean on random instances with polynomial families too") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    corridor::RandomInstance inst = corridor::random_instance(rng);
    DsoSolution dso = corridor::solve_dso(inst.corridor, inst.schedule);
    DueSolution due = corridor::construct_due(dso, inst.corridor, inst.schedule);
    corridor::GridSpec grid;
    grid.interior_per_segment = 12;
    corridor::ResidualReport rep =
        corridor::verify_due(due, inst.corridor, inst.schedule, grid);
    CHECK(rep.pass(1e-8));
    CHECK(due.total_cost >= dso.total_cost - 1e-9);
    CHECK(due.total_cost - dso.total_cost == doctest::Approx(dso.revenue).epsilon(1e-8));
  }
}
