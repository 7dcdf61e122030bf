#pragma once

#include <iosfwd>

#include "dso.hpp"
#include "simplex.hpp"

namespace corridor {

/// Time-gridded transcription of the system-optimal assignment problem.
/// Variables are arrival flow rates q_{i,k,n} >= 0 on bins [t_n, t_n + dt);
/// demand rows fix sum_n q dt = Q_{i,k}, capacity rows cap sum_{j>=i,k} q at
/// mu_i per bin.
struct DiscreteLp {
  double t0 = 0.0;
  double dt = 0.0;
  int n_bins = 0;
  int n = 0;  // bottlenecks
  int k = 0;  // groups
  LpProblem lp;

  int var(int i, int g, int bin) const { return (i * k + g) * n_bins + bin; }
  int demand_row(int i, int g) const { return i * k + g; }
  int capacity_row(int i, int bin) const { return i * n_bins + bin; }  // within le rows
  double bin_time(int bin) const { return t0 + dt * bin; }
  double bin_mid(int bin) const { return t0 + dt * (bin + 0.5); }
};

DiscreteLp discretize(const Corridor& c, const ScheduleDelay& f, double dt, double padding);

struct LpOracleResult {
  LpStatus status = LpStatus::IterLimit;
  double objective = 0.0;
  std::vector<double> flows;                    // primal, per var index
  std::vector<std::vector<double>> rho_hat;     // per (i,k)
  std::vector<std::vector<double>> price_hat;   // per (i, bin)
  double duality_gap = 0.0;
  long pivots = 0;
};

LpOracleResult solve_discrete(const DiscreteLp& d, long max_pivots = 1000000);

struct OracleComparison {
  double objective_gap_rel = 0.0;
  double max_price_gap = 0.0;  // away from closed-form breakpoints
  double max_rho_gap = 0.0;
  double lp_objective = 0.0;
  double closed_form_objective = 0.0;
};

/// Bins whose interval straddles a closed-form breakpoint are excluded from
/// the price-gap statistic (dual steps cannot track a kink inside a bin).
OracleComparison compare_to_closed_form(const LpOracleResult& r, const DiscreteLp& d,
                                        const DsoSolution& dso, const ScheduleDelay& f);

/// Per-bottleneck transportation instance on the fixed aggregate window: all
/// bins carry mu_bar_i, groups must receive their demand. Solved by the same
/// simplex; the greedy sorted assignment provides an independent optimum.
struct SubproblemOracle {
  double lp_objective = 0.0;
  double greedy_objective = 0.0;
  LpStatus status = LpStatus::IterLimit;
};

SubproblemOracle solve_subproblem(const Corridor& c, const ScheduleDelay& f,
                                  const DsoSolution& dso, int bottleneck, double dt);

/// Row/col/value triplet text dump of the discretized problem.
void dump_lp(const DiscreteLp& d, std::ostream& os);

}  // namespace corridor
