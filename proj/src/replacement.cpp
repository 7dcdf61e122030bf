#include "replacement.hpp"

namespace corridor {

namespace {

// Descriptor of a prefix derivative on a slice segment: d/dt S_a = coef * c'(t),
// with coef = -beta^{g_a(s)} inside window a and 0 outside.
double prefix_slope_coef(const DsoSolution& dso, const Corridor& c, int a, int s) {
  if (a < 0) return 0.0;
  int g = dso.slices.group[a][s];
  return g < 0 ? 0.0 : -c.betas[g];
}

}  // namespace

const PiecewiseCurve& prefix_or_zero(const DsoSolution& dso, int idx) {
  static const PiecewiseCurve zero;
  return idx < 0 ? zero : dso.price_prefix[idx];
}

FlowBuild build_flows(const DsoSolution& dso, const Corridor& c, const std::vector<int>& anchor,
                      const std::vector<bool>& locked) {
  const int n = c.n_bottlenecks();
  const int k = c.n_groups();
  const SliceMap& sm = dso.slices;
  const int ns = sm.n_segments();

  // Per-segment descriptors (value = g * c'(t) + b) for F_{i} and q_i,
  // computed top-down so each origin sees the upstream arrivals.
  std::vector<PiecewiseCurve::Segment> upstream(ns);  // F_{i+1}
  FlowBuild out;
  out.group_flows.assign(n, std::vector<PiecewiseCurve>(k));
  out.origin_flows.resize(n);
  out.through_flows.resize(n);

  std::vector<std::vector<PiecewiseCurve::Segment>> origin(n,
                                                           std::vector<PiecewiseCurve::Segment>(ns));
  for (int i = n - 1; i >= 0; --i) {
    std::vector<PiecewiseCurve::Segment> through(ns);
    for (int s = 0; s < ns; ++s) {
      bool inside = sm.group[i][s] >= 0;
      PiecewiseCurve::Segment q;  // zero off-window
      if (inside) {
        double coef = prefix_slope_coef(dso, c, anchor[i], s);
        // rate factor 1 - coef * c'(t)
        if (locked[i]) {
          q.g = -dso.derived.mu_bar[i] * coef;
          q.b = dso.derived.mu_bar[i];
        } else {
          q.g = -c.capacities[i] * coef - upstream[s].g;
          q.b = c.capacities[i] - upstream[s].b;
        }
      }
      origin[i][s] = q;
      through[s] = {0.0, upstream[s].g + q.g, upstream[s].b + q.b};
    }
    upstream = through;
    PiecewiseCurve cur(sm.breaks, std::move(through));
    cur.normalize();
    out.through_flows[i] = std::move(cur);
  }

  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < k; ++g) {
      std::vector<PiecewiseCurve::Segment> segs(ns);
      for (int s = 0; s < ns; ++s)
        if (sm.group[i][s] == g) segs[s] = origin[i][s];
      PiecewiseCurve cur(sm.breaks, std::move(segs));
      cur.normalize();
      out.group_flows[i][g] = std::move(cur);
    }
    PiecewiseCurve cur(sm.breaks, std::move(origin[i]));
    cur.normalize();
    out.origin_flows[i] = std::move(cur);
  }
  return out;
}

}  // namespace corridor
