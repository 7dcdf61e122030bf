#include "due.hpp"

#include <algorithm>
#include <cmath>

#include "replacement.hpp"

namespace corridor {

double DueSolution::tau(int i, double t, const ScheduleDelay& f) const {
  return t - queue_prefix[i].eval(t, f) - free_flow_times[i];
}

double DueSolution::sigma(int i, double t, const ScheduleDelay& f) const {
  double upstream_delay = i > 0 ? queue_prefix[i - 1].eval(t, f) : 0.0;
  double d_prev = i > 0 ? free_flow_times[i - 1] : 0.0;
  return t - upstream_delay - d_prev;
}

DueSolution construct_due(const DsoSolution& dso, const Corridor& c, const ScheduleDelay& f,
                          bool force) {
  const EqualCostWindow& h = dso.horizon();
  QrpReport qrp = check_qrp_condition(f, c.capacities, h.t_minus, h.t_plus);
  if (!qrp.holds && !force) throw QrpConditionViolated(qrp.summary());

  DueSolution s;
  s.qrp = qrp;
  s.queue_delays = dso.prices;
  s.queue_prefix = dso.price_prefix;
  s.rho = dso.rho;
  s.windows = dso.windows;
  s.slices = dso.slices;
  s.free_flow_times = c.free_flow_times;
  s.capacities = c.capacities;

  const int n = c.n_bottlenecks();
  std::vector<int> anchor(n);
  for (int i = 0; i < n; ++i) anchor[i] = i;
  FlowBuild fb = build_flows(dso, c, anchor, std::vector<bool>(n, false));
  s.flows = std::move(fb.group_flows);
  s.origin_flows = std::move(fb.origin_flows);
  s.through_flows = std::move(fb.through_flows);

  s.total_cost = 0.0;
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < c.n_groups(); ++g) s.total_cost += c.demands[i][g] * s.rho[i][g];
  return s;
}

ResidualReport verify_due(const DueSolution& s, const Corridor& c, const ScheduleDelay& f,
                          const GridSpec& grid) {
  StateView view;
  view.corridor = &c;
  view.f = &f;
  view.flows = &s.flows;
  view.rho = &s.rho;
  view.nonsched_prefix = &s.queue_prefix;
  view.delay_prefix = &s.queue_prefix;
  view.breaks = &s.slices.breaks;
  for (int i = 0; i < c.n_bottlenecks(); ++i)
    view.queues.push_back({"bottleneck " + std::to_string(i + 1), &s.queue_delays[i],
                           c.capacities[i], &s.queue_prefix[i], &s.through_flows[i]});
  return residual_eval(view, grid);
}

double total_cost_due(const DueSolution& s, const Corridor& c) {
  double z = 0.0;
  for (int i = 0; i < c.n_bottlenecks(); ++i)
    for (int g = 0; g < c.n_groups(); ++g) z += c.demands[i][g] * s.rho[i][g];
  return z;
}

double CumulativeCurves::arrivals_at(double wall_time) const {
  if (arrival_time.empty()) return 0.0;
  if (wall_time <= arrival_time.front()) return 0.0;
  if (wall_time >= arrival_time.back()) return mass.back();
  auto it = std::upper_bound(arrival_time.begin(), arrival_time.end(), wall_time);
  std::size_t j = it - arrival_time.begin();
  double span = arrival_time[j] - arrival_time[j - 1];
  double w = span > 0.0 ? (wall_time - arrival_time[j - 1]) / span : 0.0;
  return mass[j - 1] + w * (mass[j] - mass[j - 1]);
}

double CumulativeCurves::departures_at(double wall_time) const {
  if (departure_time.empty()) return 0.0;
  if (wall_time <= departure_time.front()) return 0.0;
  if (wall_time >= departure_time.back()) return mass.back();
  auto it = std::upper_bound(departure_time.begin(), departure_time.end(), wall_time);
  std::size_t j = it - departure_time.begin();
  double span = departure_time[j] - departure_time[j - 1];
  double w = span > 0.0 ? (wall_time - departure_time[j - 1]) / span : 0.0;
  return mass[j - 1] + w * (mass[j] - mass[j - 1]);
}

CumulativeCurves cumulative_curves(const DueSolution& s, const Corridor& c,
                                   const ScheduleDelay& f, int bottleneck) {
  const SliceMap& sm = s.slices;
  const int n = c.n_bottlenecks();
  const int ns = sm.n_segments();

  // Service-indexed flow through the bottleneck: while a queue is active the
  // departure rate in wall-clock time is the capacity, which in
  // destination-arrival coordinates reads mu_m * (1 - d/dt sum_{j<m} w_j)
  // with m the innermost active origin at or above `bottleneck`.
  std::vector<PiecewiseCurve::Segment> segs(ns);
  for (int seg = 0; seg < ns; ++seg) {
    int innermost = -1;
    for (int i = 0; i < n; ++i)
      if (sm.group[i][seg] >= 0) {
        innermost = i;
        break;
      }
    if (innermost < 0) continue;
    int m = std::max(bottleneck, innermost);
    double coef = 0.0;  // d/dt sum_{j<m} w_j = coef * c'(t)
    if (m > 0 && sm.group[m - 1][seg] >= 0) coef = -c.betas[sm.group[m - 1][seg]];
    segs[seg] = {0.0, -c.capacities[m] * coef, c.capacities[m]};
  }
  PiecewiseCurve service_flow(sm.breaks, std::move(segs));
  service_flow.normalize();

  CumulativeCurves out;
  const int interior = 8;
  double acc = 0.0;
  double prev = sm.breaks.front();
  auto push = [&](double t) {
    acc += service_flow.integral(f, prev, t);
    prev = t;
    out.dest_time.push_back(t);
    out.arrival_time.push_back(s.tau(bottleneck, t, f));
    out.departure_time.push_back(s.sigma(bottleneck, t, f));
    out.mass.push_back(acc);
  };
  for (int seg = 0; seg < ns; ++seg) {
    push(sm.breaks[seg]);
    for (int q = 1; q <= interior; ++q)
      push(sm.breaks[seg] + (sm.breaks[seg + 1] - sm.breaks[seg]) * q / (interior + 1));
  }
  push(sm.breaks.back());
  return out;
}

}  // namespace corridor
