#include <doctest.h>

#include <random>

#include "schedule.hpp"

using corridor::ScheduleDelay;
using corridor::Side;

namespace {

// Independent root-finder for the equal-cost window: plain bisection on
// c(x) = c(x + T) without using the closed form.
double window_start_by_bisection(const ScheduleDelay& f, double T) {
  double lo = -T, hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f.cost(mid) - f.cost(mid + T) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("piecewise linear cost and slopes") {
  ScheduleDelay f = ScheduleDelay::piecewise_linear(0.4, 0.9);
  CHECK(f.cost(0.0) == 0.0);
  CHECK(f.cost(-2.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(f.cost(1.0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(f.slope(-1.0, Side::Left) == doctest::Approx(-0.4));
  CHECK(f.slope(-1.0, Side::Right) == doctest::Approx(-0.4));
  CHECK(f.slope(0.0, Side::Left) == doctest::Approx(-0.4));
  CHECK(f.slope(0.0, Side::Right) == doctest::Approx(0.9));
  CHECK(f.slope(2.0, Side::Left) == doctest::Approx(0.9));
}

TEST_CASE("family constructors reject malformed input") {
  CHECK_THROWS_AS(ScheduleDelay::piecewise_linear(1.2, 0.9), corridor::SolverError);
  CHECK_THROWS_AS(ScheduleDelay::piecewise_linear(-0.1, 0.9), corridor::SolverError);
  CHECK_THROWS_AS(ScheduleDelay::convex_polynomial({}), corridor::SolverError);
  CHECK_THROWS_AS(ScheduleDelay::convex_polynomial({0.0}), corridor::SolverError);
  CHECK_THROWS_AS(ScheduleDelay::convex_polynomial({-1.0}), corridor::SolverError);
}

TEST_CASE("equal-cost window closed form matches bisection") {
  ScheduleDelay f = ScheduleDelay::piecewise_linear(0.4, 0.9);

  corridor::EqualCostWindow w0 = f.window(0.0);
  CHECK(w0.t_minus == 0.0);
  CHECK(w0.t_plus == 0.0);
  CHECK(w0.cost == 0.0);

  corridor::EqualCostWindow w2 = f.window(2.0);
  CHECK(w2.t_minus == doctest::Approx(-1.384615385).epsilon(1e-8));
  CHECK(w2.t_plus == doctest::Approx(0.615384615).epsilon(1e-8));
  CHECK(w2.cost == doctest::Approx(0.553846154).epsilon(1e-8));
  CHECK(w2.t_minus == doctest::Approx(window_start_by_bisection(f, 2.0)).epsilon(1e-9));

  corridor::EqualCostWindow w4 = f.window(4.0);
  CHECK(w4.t_minus == doctest::Approx(-2.769230769).epsilon(1e-8));
  CHECK(w4.t_plus == doctest::Approx(1.230769231).epsilon(1e-8));
  CHECK(w4.cost == doctest::Approx(1.107692308).epsilon(1e-8));
  CHECK(w4.t_minus == doctest::Approx(window_start_by_bisection(f, 4.0)).epsilon(1e-9));
}

TEST_CASE("windows of the polynomial family solve the equal-cost equation") {
  ScheduleDelay f = ScheduleDelay::convex_polynomial({0.3, 0.05});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> len(0.01, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    double T = len(rng);
    corridor::EqualCostWindow w = f.window(T);
    CHECK(w.t_plus - w.t_minus == doctest::Approx(T).epsilon(1e-12));
    CHECK(f.cost(w.t_minus) == doctest::Approx(f.cost(w.t_plus)).epsilon(1e-8));
  }
}

TEST_CASE("windows nest and window costs grow with T") {
  for (const ScheduleDelay& f : {ScheduleDelay::piecewise_linear(0.4, 0.9),
                                 ScheduleDelay::convex_polynomial({0.2})}) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> len(0.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
      double a = len(rng), b = len(rng);
      double t1 = std::min(a, b), t2 = std::max(a, b);
      if (t2 - t1 < 1e-9) continue;
      corridor::EqualCostWindow w1 = f.window(t1), w2 = f.window(t2);
      CHECK(w1.t_minus >= w2.t_minus - 1e-9);
      CHECK(w1.t_plus <= w2.t_plus + 1e-9);
      CHECK(w1.cost < w2.cost + 1e-12);
      CHECK(f.cost(w1.t_minus) == doctest::Approx(f.cost(w1.t_plus)).epsilon(1e-10));
    }
  }
}

TEST_CASE("group-weighted costs are submodular late, supermodular early") {
  ScheduleDelay f = ScheduleDelay::piecewise_linear(0.4, 0.9);
  std::vector<double> betas = {1.0, 0.7, 0.4, 0.2};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 10000; ++trial) {
    int g = pick(rng);
    double a = u(rng), b = u(rng);
    double t = std::min(a, b), tp = std::max(a, b);
    if (tp - t < 1e-12) continue;
    double lhs = betas[g] * f.cost(t) + betas[g + 1] * f.cost(tp);
    double rhs = betas[g + 1] * f.cost(t) + betas[g] * f.cost(tp);
    CHECK(lhs < rhs);  // submodular for late arrivals
    // early side: -tp < -t, so the roles swap
    lhs = betas[g] * f.cost(-tp) + betas[g + 1] * f.cost(-t);
    rhs = betas[g + 1] * f.cost(-tp) + betas[g] * f.cost(-t);
    CHECK(lhs > rhs);  // supermodular for early arrivals
  }
}

TEST_CASE("sampled slopes stay above -1 on the working horizon") {
  ScheduleDelay pl = ScheduleDelay::piecewise_linear(0.95, 2.0);
  ScheduleDelay poly = ScheduleDelay::convex_polynomial({0.1});
  for (int j = 0; j <= 256; ++j) {
    double t = -4.0 + 8.0 * j / 256;
    CHECK(pl.slope(t, Side::Left) > -1.0);
    CHECK(pl.slope(t, Side::Right) > -1.0);
    CHECK(poly.slope(t, Side::Left) > -1.0);  // 0.2|t| < 1 on [-4, 4]
  }
  // polynomial slopes do break the bound far out; that is why the band check
  // samples the horizon actually used
  CHECK(poly.slope(-6.0, Side::Left) < -1.0);
}

TEST_CASE("slope-band check on capacities") {
  ScheduleDelay f = ScheduleDelay::piecewise_linear(0.4, 0.9);
  std::vector<double> mu = {2.0, 1.0};
  corridor::QrpReport rep = corridor::check_qrp_condition(f, mu, -3.0, 2.0);
  CHECK(rep.holds);
  CHECK(rep.worst_margin == doctest::Approx(0.1).epsilon(1e-12));

  ScheduleDelay boundary = ScheduleDelay::piecewise_linear(0.5, 0.9);
  corridor::QrpReport rep2 = corridor::check_qrp_condition(boundary, mu, -3.0, 2.0);
  CHECK_FALSE(rep2.holds);
  CHECK(!rep2.violating.empty());
  CHECK(rep2.violating.front().pair == 1);

  std::vector<double> one = {1.5};
  corridor::QrpReport rep3 = corridor::check_qrp_condition(f, one, -3.0, 2.0);
  CHECK(rep3.holds);  // no adjacent pair
}
