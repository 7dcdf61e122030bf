#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "network.hpp"

namespace corridor {

struct RandomInstance {
  Corridor corridor;
  ScheduleDelay schedule = ScheduleDelay::piecewise_linear(0.5, 0.5);
};

/// Valid random corridor: N <= 5, K <= 4, strict orderings, aggregate windows
/// strictly nested, schedule-delay slopes strictly inside the QRP band.
/// Mostly piecewise linear; a fraction of draws exercises the polynomial
/// family.
RandomInstance random_instance(std::mt19937_64& rng);

struct SelftestResult {
  int instances = 0;
  int failures = 0;
  double worst_residual = 0.0;
  double worst_rho_gap = 0.0;
  double worst_ordering_slack = 0.0;
  std::string report;
  bool pass() const { return failures == 0; }
};

/// Randomized equilibrium suite: for each instance, builds the closed-form
/// states (no-policy equilibrium plus a random policy menu), residual-checks
/// each against its own complementarity system at tolerance `tol`, and checks
/// commuting-cost invariance and the total-cost orderings.
SelftestResult run_selftest(std::uint64_t seed, int count, double tol = 1e-8);

}  // namespace corridor
