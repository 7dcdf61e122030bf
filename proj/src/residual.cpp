#include "residual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace corridor {

namespace {

// Comp residual of 0 <= x  perp  s >= 0: violation of either sign plus the
// product structure.
double comp_residual(double x, double s) {
  double r = std::max(0.0, std::min(x, s));
  r = std::max(r, -std::min(0.0, x));
  r = std::max(r, -std::min(0.0, s));
  return r;
}

}  // namespace

std::string ResidualReport::text() const {
  std::ostringstream os;
  os << "max residuals: departure-time-choice " << max_dtc << ", queueing " << max_queue
     << ", conservation " << max_conservation << ", flow negativity " << max_flow_negativity
     << "; min consistency margin " << min_consistency;
  for (const auto& n : notes) os << "\n  note: " << n;
  return os.str();
}

ResidualReport residual_eval(const StateView& view, const GridSpec& grid) {
  const Corridor& c = *view.corridor;
  const ScheduleDelay& f = *view.f;
  const int n = c.n_bottlenecks();
  const int k = c.n_groups();

  // Sample times: both sides of every breakpoint plus interior points.
  std::vector<std::pair<double, Side>> samples;
  const std::vector<double>& breaks = *view.breaks;
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    samples.push_back({breaks[j], Side::Left});
    samples.push_back({breaks[j], Side::Right});
    if (j + 1 < breaks.size()) {
      for (int q = 1; q <= grid.interior_per_segment; ++q)
        samples.push_back(
            {breaks[j] + (breaks[j + 1] - breaks[j]) * q / (grid.interior_per_segment + 1),
             Side::Right});
    }
  }

  ResidualReport rep;
  rep.min_consistency = std::numeric_limits<double>::infinity();

  for (auto [t, side] : samples) {
    for (int i = 0; i < n; ++i) {
      double prefix = (*view.nonsched_prefix)[i].eval(t, f, side);
      for (int g = 0; g < k; ++g) {
        double q = (*view.flows)[i][g].eval(t, f, side);
        double slack = c.betas[g] * f.cost(t) + c.free_flow_times[i] + prefix - (*view.rho)[i][g];
        rep.max_flow_negativity = std::max(rep.max_flow_negativity, -std::min(0.0, q));
        rep.max_dtc = std::max(rep.max_dtc, comp_residual(q, slack));
      }
      rep.min_consistency =
          std::min(rep.min_consistency, 1.0 - (*view.delay_prefix)[i].deriv(t, f, side));
    }
    for (const auto& qc : view.queues) {
      double w = qc.queue ? qc.queue->eval(t, f, side) : 0.0;
      double factor = 1.0 - (qc.rate_basis ? qc.rate_basis->deriv(t, f, side) : 0.0);
      double slack = qc.service_rate * factor - qc.through->eval(t, f, side);
      rep.max_queue = std::max(rep.max_queue, comp_residual(w, slack));
    }
  }

  for (int i = 0; i < n; ++i)
    for (int g = 0; g < k; ++g)
      rep.max_conservation = std::max(
          rep.max_conservation, std::abs((*view.flows)[i][g].integral(f) - c.demands[i][g]));
  return rep;
}

}  // namespace corridor
