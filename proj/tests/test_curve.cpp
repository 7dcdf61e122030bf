#include <doctest.h>

#include <cmath>
#include "curve.hpp"

using corridor::PiecewiseCurve;
using corridor::ScheduleDelay;
using corridor::Side;

TEST_CASE("evaluation, sides and support") {
  ScheduleDelay f = ScheduleDelay::piecewise_linear(0.4, 0.9);
  //  1 + c(t) on [-1, 0), 2 on [0, 1)
  PiecewiseCurve cur({-1.0, 0.0, 1.0}, {{1.0, 0.0, 1.0}, {0.0, 0.0, 2.0}});
  CHECK(cur.eval(-2.0, f) == 0.0);
  CHECK(cur.eval(1.5, f) == 0.0);
  CHECK(cur.eval(-0.5, f) == doctest::Approx(1.2));
  CHECK(cur.eval(0.0, f, Side::Left) == doctest::Approx(1.0));
  CHECK(cur.eval(0.0, f, Side::Right) == doctest::Approx(2.0));
  CHECK(cur.eval(1.0, f, Side::Left) == doctest::Approx(2.0));
  CHECK(cur.eval(1.0, f, Side::Right) == 0.0);
  CHECK(cur.max_jump(f) == doctest::Approx(1.0));
  CHECK(cur.deriv(-0.5, f, Side::Left) == doctest::Approx(-0.4));
}

TEST_CASE("integral is exact for the linear family") {
  ScheduleDelay f = ScheduleDelay::piecewise_linear(0.4, 0.9);
  PiecewiseCurve cur({-1.0, 0.0, 1.0}, {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});  // c(t)
  // int c over [-1,0] = 0.2, over [0,1] = 0.45
  CHECK(cur.integral(f) == doctest::Approx(0.65).epsilon(1e-14));
  CHECK(cur.integral(f, -1.0, 0.0) == doctest::Approx(0.2).epsilon(1e-14));

  // slope-term segments integrate to differences of c
  PiecewiseCurve flow({-1.0, 1.0}, {{0.0, 2.0, 1.0}});  // 1 + 2 c'(t)
  CHECK(flow.integral(f) == doctest::Approx(2.0 + 2.0 * (f.cost(1.0) - f.cost(-1.0))));
}

TEST_CASE("adaptive integration matches closed form on polynomials") {
  ScheduleDelay f = ScheduleDelay::convex_polynomial({0.3, 0.1});
  PiecewiseCurve cur({-2.0, 1.5}, {{1.0, 0.0, 0.0}});
  auto exact = [](double t) { return 0.3 * t * t * t / 3.0 + 0.1 * std::pow(t, 5) / 5.0; };
  CHECK(cur.integral(f) == doctest::Approx(exact(1.5) - exact(-2.0)).epsilon(1e-9));
}

TEST_CASE("arithmetic merges breakpoints") {
  ScheduleDelay f = ScheduleDelay::piecewise_linear(0.4, 0.9);
  PiecewiseCurve a({-1.0, 1.0}, {{0.0, 0.0, 1.0}});
  PiecewiseCurve b({0.0, 2.0}, {{0.0, 0.0, 2.0}});
  PiecewiseCurve sum = a + b;
  CHECK(sum.eval(-0.5, f) == doctest::Approx(1.0));
  CHECK(sum.eval(0.5, f) == doctest::Approx(3.0));
  CHECK(sum.eval(1.5, f) == doctest::Approx(2.0));
  PiecewiseCurve diff = sum - b;
  diff.normalize();
  CHECK(diff.eval(-0.5, f) == doctest::Approx(1.0));
  CHECK(diff.eval(0.5, f) == doctest::Approx(1.0));
  CHECK(diff.eval(1.5, f) == 0.0);
  CHECK(diff.support_hi() == doctest::Approx(1.0));
}

TEST_CASE("normalize trims zero tails and merges equal runs") {
  PiecewiseCurve cur({0.0, 1.0, 2.0, 3.0, 4.0},
                     {{0, 0, 0.0}, {0, 0, 5.0}, {0, 0, 5.0}, {0, 0, 0.0}});
  cur.normalize();
  CHECK(cur.n_segments() == 1);
  CHECK(cur.support_lo() == doctest::Approx(1.0));
  CHECK(cur.support_hi() == doctest::Approx(3.0));
}
