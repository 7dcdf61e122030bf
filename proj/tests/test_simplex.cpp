#include <doctest.h>

#include "simplex.hpp"

using corridor::LpProblem;
using corridor::LpSolution;
using corridor::LpStatus;

namespace {

// min x + 2y  s.t.  x + y = 1, x <= 0.6
LpProblem tiny() {
  LpProblem lp;
  lp.n_eq = 1;
  lp.n_le = 1;
  lp.rhs = {1.0, 0.6};
  lp.objective = {1.0, 2.0};
  lp.columns.resize(2);
  lp.columns[0].idx = {0, 1};
  lp.columns[0].val = {1.0, 1.0};
  lp.columns[1].idx = {0};
  lp.columns[1].val = {1.0};
  return lp;
}

}  // namespace

TEST_CASE("small problem with duals") {
  LpSolution s = corridor::solve_lp(tiny());
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(0.6 + 2.0 * 0.4).epsilon(1e-12));
  CHECK(s.x[0] == doctest::Approx(0.6));
  CHECK(s.x[1] == doctest::Approx(0.4));
  // binding capacity: price = reduced saving of relaxing x <= 0.6
  CHECK(s.duals_eq[0] == doctest::Approx(2.0));
  CHECK(s.duals_le[0] == doctest::Approx(-1.0));
  CHECK(s.duality_gap <= 1e-12);
}

TEST_CASE("infeasible equality system is detected") {
  LpProblem lp;
  lp.n_eq = 1;
  lp.n_le = 1;
  lp.rhs = {2.0, 1.0};  // x = 2 impossible under x <= 1
  lp.objective = {1.0};
  lp.columns.resize(1);
  lp.columns[0].idx = {0, 1};
  lp.columns[0].val = {1.0, 1.0};
  LpSolution s = corridor::solve_lp(lp);
  CHECK(s.status == LpStatus::Infeasible);
}

TEST_CASE("iteration limit reported") {
  LpSolution s = corridor::solve_lp(tiny(), 0);
  CHECK(s.status == LpStatus::IterLimit);
}

TEST_CASE("degenerate transportation problem still solves") {
  // two supplies, two sinks with equal costs in one column: forces ties
  LpProblem lp;
  lp.n_eq = 2;
  lp.n_le = 2;
  lp.rhs = {1.0, 1.0, 1.0, 1.0};
  lp.objective = {1.0, 1.0, 2.0, 1.0};
  lp.columns.resize(4);
  auto col = [&](int v, int eq, int le) {
    lp.columns[v].idx = {eq, 2 + le};
    lp.columns[v].val = {1.0, 1.0};
  };
  col(0, 0, 0);
  col(1, 0, 1);
  col(2, 1, 0);
  col(3, 1, 1);
  LpSolution s = corridor::solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(2.0));
}

TEST_CASE("identical input gives identical pivot sequence") {
  LpSolution a = corridor::solve_lp(tiny());
  LpSolution b = corridor::solve_lp(tiny());
  CHECK(a.pivots == b.pivots);
  CHECK(a.x == b.x);
  CHECK(a.duals_eq == b.duals_eq);
  CHECK(a.duals_le == b.duals_le);
}
