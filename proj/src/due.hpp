#pragma once

#include <optional>

#include "dso.hpp"
#include "residual.hpp"

namespace corridor {

/// No-toll equilibrium built from the optimal price pattern: every bottleneck
/// queue delay reproduces the corresponding price curve, commuting costs and
/// arrival windows carry over unchanged.
struct DueSolution {
  std::vector<PiecewiseCurve> queue_delays;   // w_i
  std::vector<PiecewiseCurve> queue_prefix;   // sum_{j<=i} w_j
  std::vector<std::vector<double>> rho;
  std::vector<std::vector<PiecewiseCurve>> flows;  // per (i,k)
  std::vector<PiecewiseCurve> origin_flows;
  std::vector<PiecewiseCurve> through_flows;  // F_i = sum_{j>=i} q_j
  std::vector<std::vector<EqualCostWindow>> windows;
  SliceMap slices;
  QrpReport qrp;
  double total_cost = 0.0;  // Z = sum Q rho (queueing is deadweight)

  std::vector<double> free_flow_times;
  std::vector<double> capacities;

  /// Arrival time at bottleneck i (0-based) of the commuter reaching the
  /// destination at t: tau_i(t) = t - sum_{j<=i} w_j(t) - d_i.
  double tau(int i, double t, const ScheduleDelay& f) const;
  /// Departure time at bottleneck i: sigma_i(t) = t - sum_{j<i} w_j(t) - d_{i-1},
  /// with d_0 = 0.
  double sigma(int i, double t, const ScheduleDelay& f) const;
};

/// Requires the QRP slope condition on the widest window; throws
/// QrpConditionViolated otherwise unless `force` asks for a diagnostic build.
DueSolution construct_due(const DsoSolution& dso, const Corridor& c, const ScheduleDelay& f,
                          bool force = false);

ResidualReport verify_due(const DueSolution& s, const Corridor& c, const ScheduleDelay& f,
                          const GridSpec& grid = {});

double total_cost_due(const DueSolution& s, const Corridor& c);

/// Physical (wall-clock time) cumulative arrival and departure curves at one
/// bottleneck, reconstructed from the queue pattern. Piecewise linear and
/// exact for the piecewise linear cost family.
struct CumulativeCurves {
  std::vector<double> dest_time;       // Lagrangian sample times
  std::vector<double> arrival_time;    // tau_i
  std::vector<double> departure_time;  // sigma_i
  std::vector<double> mass;            // cumulative count through the bottleneck

  double arrivals_at(double wall_time) const;    // A_i
  double departures_at(double wall_time) const;  // D_i
  double total_mass() const { return mass.empty() ? 0.0 : mass.back(); }
};

CumulativeCurves cumulative_curves(const DueSolution& s, const Corridor& c,
                                   const ScheduleDelay& f, int bottleneck /* 0-based */);

}  // namespace corridor
