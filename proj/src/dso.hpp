#pragma once

#include <vector>

#include "curve.hpp"
#include "network.hpp"

namespace corridor {

/// Partition of the widest arrival window into segments on which every
/// bottleneck's active group is constant. group[i][s] is the 0-based group
/// whose slice of bottleneck i covers segment s, or -1 outside bottleneck i's
/// window. Segment s spans [breaks[s], breaks[s+1]).
struct SliceMap {
  std::vector<double> breaks;
  std::vector<std::vector<int>> group;

  int n_segments() const { return breaks.empty() ? 0 : static_cast<int>(breaks.size()) - 1; }
};

struct DsoSolution {
  std::vector<std::vector<EqualCostWindow>> windows;  // [i][k]: Gamma(T_{i,k})
  std::vector<std::vector<double>> window_lengths;    // T_{i,k}, cumulative in k
  std::vector<std::vector<double>> rho;               // equilibrium commuting costs
  std::vector<PiecewiseCurve> prices;                 // p_i
  std::vector<PiecewiseCurve> price_prefix;           // S_i = sum_{j<=i} p_j
  std::vector<PiecewiseCurve> agg_flows;              // q_i = mu_bar_i on window i
  std::vector<std::vector<PiecewiseCurve>> group_flows;
  SliceMap slices;
  DerivedQuantities derived;

  double payments = 0.0;    // sum Q_{i,k} rho_{i,k}
  double revenue = 0.0;     // sum_i mu_i * integral of p_i
  double total_cost = 0.0;  // payments - revenue

  const EqualCostWindow& horizon() const;  // widest window, of the top origin
};

/// Cumulative arrival windows per (origin, group): T_{i,k} = cumQ_{i,k} / mu_bar_i,
/// window = Gamma(T_{i,k}). Throws InvalidCorridor when the corridor fails
/// validation or when aggregate windows are not strictly nested across origins
/// (the closed form's support structure needs T_i < T_{i+1}).
std::vector<std::vector<EqualCostWindow>> compute_windows(const Corridor& c,
                                                          const ScheduleDelay& f);

DsoSolution solve_dso(const Corridor& c, const ScheduleDelay& f);

/// Re-derives Z from the stored curves and costs (exact piecewise integration).
double total_cost_dso(const DsoSolution& s, const Corridor& c, const ScheduleDelay& f);

}  // namespace corridor
