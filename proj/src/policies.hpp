#pragma once

#include "due.hpp"

namespace corridor {

enum class StateKind { Dso, Due, Pbp, Rm, Rp, Prm, Prp };

const char* state_name(StateKind k);

/// Management policy selector. `subset` holds 1-based bottleneck (PBP) or
/// on-ramp (PRM/PRP) indices; the full-implementation policies ignore it.
struct PolicySpec {
  StateKind kind = StateKind::Due;
  std::vector<int> subset;
};

struct PolicySolution {
  StateKind kind = StateKind::Due;
  std::vector<int> subset;

  std::vector<PiecewiseCurve> mainline_queues;  // per bottleneck
  std::vector<PiecewiseCurve> ramp_queues;      // per origin's on-ramp
  std::vector<PiecewiseCurve> bottleneck_tolls;
  std::vector<PiecewiseCurve> ramp_tolls;
  std::vector<std::vector<PiecewiseCurve>> flows;  // per (i,k)
  std::vector<PiecewiseCurve> origin_flows;
  std::vector<PiecewiseCurve> through_flows;
  /// Per-origin composed delay prefix (queues its commuters traverse) and
  /// non-schedule cost prefix (delays plus tolls).
  std::vector<PiecewiseCurve> delay_prefix;
  std::vector<PiecewiseCurve> nonsched_prefix;
  /// Per-origin prefix whose derivative sets the service-rate factor of the
  /// origin's bottleneck/ramp condition.
  std::vector<PiecewiseCurve> rate_basis;
  /// Locations whose queue condition belongs to this policy's system.
  std::vector<int> bottleneck_checks;
  std::vector<int> ramp_checks;
  /// Commuting costs re-evaluated from the composed cost on each group's
  /// slice (not copied from the inputs), so invariance checks are real.
  std::vector<std::vector<double>> rho;

  double payments = 0.0;
  double revenue = 0.0;
  double total_cost = 0.0;
};

PolicySolution solve_pbp(const DsoSolution& dso, const DueSolution& due, const Corridor& c,
                         const ScheduleDelay& f, const std::vector<int>& subset);
PolicySolution solve_rm(const DsoSolution& dso, const DueSolution& due, const Corridor& c,
                        const ScheduleDelay& f);
PolicySolution solve_rp(const DsoSolution& dso, const DueSolution& due, const Corridor& c,
                        const ScheduleDelay& f);
PolicySolution solve_prm(const DsoSolution& dso, const DueSolution& due, const Corridor& c,
                         const ScheduleDelay& f, const std::vector<int>& subset);
PolicySolution solve_prp(const DsoSolution& dso, const DueSolution& due, const Corridor& c,
                         const ScheduleDelay& f, const std::vector<int>& subset);
PolicySolution solve_policy(const DsoSolution& dso, const DueSolution& due, const Corridor& c,
                            const ScheduleDelay& f, const PolicySpec& spec);

/// Residual check against the policy's own complementarity system (the
/// queue-condition families match each policy's defining problem).
ResidualReport verify_policy(const PolicySolution& s, const DsoSolution& dso, const Corridor& c,
                             const ScheduleDelay& f, const GridSpec& grid = {});

struct ComparisonRow {
  PolicySpec spec;
  double total_cost = 0.0;
  double revenue = 0.0;
  double rho_gap = 0.0;  // max |rho - rho_dso|
  bool pareto = false;   // rho unchanged and Z <= Z_due
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::vector<std::string> ordering_failures;  // empty when all orderings hold
  bool orderings_hold() const { return ordering_failures.empty(); }
};

/// Solves every requested state and checks the total-cost orderings
/// (Z_dso = Z_rp < Z_rm = Z_due when prices are nonzero, partial policies in
/// between, metering never better than the no-policy state).
Comparison compare_policies(const Corridor& c, const ScheduleDelay& f,
                            const std::vector<PolicySpec>& specs);

}  // namespace corridor
