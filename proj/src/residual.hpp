#pragma once

#include <string>
#include <vector>

#include "curve.hpp"
#include "network.hpp"

namespace corridor {

struct GridSpec {
  int interior_per_segment = 128;
};

/// One queued (or meterable/tollable) service point whose complementarity
/// condition is part of the state's defining system:
///   0 <= queue(t)  perp  service_rate * (1 - d/dt rate_basis(t)) - through(t) >= 0.
struct QueueCheck {
  std::string name;
  const PiecewiseCurve* queue = nullptr;      // null means identically zero
  double service_rate = 0.0;
  const PiecewiseCurve* rate_basis = nullptr; // null means factor 1
  const PiecewiseCurve* through = nullptr;    // flow to be served
};

/// Everything residual_eval needs to check a state against its
/// complementarity system. Curves are borrowed, not owned.
struct StateView {
  const Corridor* corridor = nullptr;
  const ScheduleDelay* f = nullptr;
  const std::vector<std::vector<PiecewiseCurve>>* flows = nullptr;  // per (i,k)
  const std::vector<std::vector<double>>* rho = nullptr;
  /// Per-origin composed non-schedule cost (queues traversed + tolls paid);
  /// the departure-time-choice slack is beta^k c(t) + d_i + prefix_i(t) - rho_{i,k}.
  const std::vector<PiecewiseCurve>* nonsched_prefix = nullptr;
  /// Per-origin composed queue-delay prefix for the consistency margin
  /// 1 - d/dt(prefix) > 0.
  const std::vector<PiecewiseCurve>* delay_prefix = nullptr;
  std::vector<QueueCheck> queues;
  /// Evaluation grid skeleton: a breakpoint partition covering every curve.
  const std::vector<double>* breaks = nullptr;
};

struct ResidualReport {
  double max_dtc = 0.0;            // departure-time-choice complementarity
  double max_queue = 0.0;          // queueing complementarity
  double max_conservation = 0.0;   // |integral q - Q|
  double max_flow_negativity = 0.0;
  double min_consistency = 0.0;    // min over grid of 1 - sum w-dot
  std::vector<std::string> notes;

  bool pass(double tol) const {
    return max_dtc <= tol && max_queue <= tol && max_conservation <= tol &&
           max_flow_negativity <= tol && min_consistency > 0.0;
  }
  std::string text() const;
};

ResidualReport residual_eval(const StateView& view, const GridSpec& grid = {});

}  // namespace corridor
