#pragma once

#include <string>
#include <vector>

#include "schedule.hpp"

namespace corridor {

/// Corridor instance. Bottleneck 1 (index 0) is the most downstream one,
/// adjacent to the destination; index N-1 is the most upstream. Group 1
/// (index 0) has the highest schedule-delay sensitivity, beta^1 = 1.
struct Corridor {
  std::vector<double> capacities;        // mu_i, strictly decreasing upstream
  std::vector<double> free_flow_times;   // d_i, strictly increasing
  std::vector<double> betas;             // beta^k in (0,1], beta^1 = 1, strictly decreasing
  std::vector<std::vector<double>> demands;  // Q[i][k], N rows of K

  int n_bottlenecks() const { return static_cast<int>(capacities.size()); }
  int n_groups() const { return static_cast<int>(betas.size()); }
  double origin_demand(int i) const;
  double total_demand() const;
};

struct Diagnostics {
  bool ok = true;
  std::vector<std::string> violations;
  std::string text() const;
};

/// Checks every Corridor invariant; never throws. Each violation names the
/// index and the failed inequality.
Diagnostics validate(const Corridor& c);

struct DerivedQuantities {
  std::vector<double> mu_bar;    // mu_i - mu_{i+1}, mu_{N+1} = 0
  std::vector<double> beta_bar;  // beta^k - beta^{k+1}, beta^{K+1} = 0
  std::vector<std::vector<double>> cum_demand;  // prefix sums over groups
};

/// Throws InvalidCorridor when validate(c) fails.
DerivedQuantities derive(const Corridor& c);

}  // namespace corridor
