#pragma once

#include <vector>

#include "dso.hpp"

namespace corridor {

/// Flow construction shared by the equilibrium states. Origin i's commuters
/// experience the composed queue prefix S_{anchor[i]} (anchor -1 means no
/// queues at all), so their arrival-indexed rate factor is
/// 1 - d/dt S_{anchor[i]}. A locked origin discharges through a meter at
/// mu_bar_i times that factor; an unlocked origin fills its bottleneck's
/// capacity balance against the flow already arriving from upstream.
struct FlowBuild {
  std::vector<std::vector<PiecewiseCurve>> group_flows;  // [i][k]
  std::vector<PiecewiseCurve> origin_flows;              // per-origin totals
  std::vector<PiecewiseCurve> through_flows;             // F_i = sum_{j>=i} q_j
};

FlowBuild build_flows(const DsoSolution& dso, const Corridor& c,
                      const std::vector<int>& anchor, const std::vector<bool>& locked);

/// S_{idx} as a curve, or the zero curve for idx < 0.
const PiecewiseCurve& prefix_or_zero(const DsoSolution& dso, int idx);

}  // namespace corridor
