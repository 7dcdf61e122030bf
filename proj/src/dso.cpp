#include "dso.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace corridor {

const EqualCostWindow& DsoSolution::horizon() const { return windows.back().back(); }

std::vector<std::vector<EqualCostWindow>> compute_windows(const Corridor& c,
                                                          const ScheduleDelay& f) {
  DerivedQuantities d = derive(c);
  const int n = c.n_bottlenecks();
  const int k = c.n_groups();
  std::vector<std::vector<EqualCostWindow>> windows(n, std::vector<EqualCostWindow>(k));
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < k; ++g) windows[i][g] = f.window(d.cum_demand[i][g] / d.mu_bar[i]);
  for (int i = 0; i + 1 < n; ++i) {
    double ti = windows[i][k - 1].length;
    double tu = windows[i + 1][k - 1].length;
    if (!(ti < tu)) {
      std::ostringstream os;
      os << "aggregate windows not strictly nested: T_" << i + 1 << " = " << ti << " >= T_"
         << i + 2 << " = " << tu
         << "; the closed form requires Q_i/mu_bar_i strictly increasing in i";
      throw InvalidCorridor(os.str());
    }
  }
  return windows;
}

namespace {

// Global breakpoints: 0 plus every nonzero window bound; slice group per
// segment is the innermost window containing it.
SliceMap build_slices(const std::vector<std::vector<EqualCostWindow>>& windows) {
  SliceMap m;
  std::vector<double> breaks{0.0};
  for (const auto& row : windows)
    for (const auto& w : row)
      if (w.length > 0.0) {
        breaks.push_back(w.t_minus);
        breaks.push_back(w.t_plus);
      }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  m.breaks = std::move(breaks);

  const int n = static_cast<int>(windows.size());
  const int k = static_cast<int>(windows[0].size());
  m.group.assign(n, std::vector<int>(m.n_segments(), -1));
  for (int s = 0; s < m.n_segments(); ++s) {
    double mid = 0.5 * (m.breaks[s] + m.breaks[s + 1]);
    for (int i = 0; i < n; ++i)
      for (int g = 0; g < k; ++g)
        if (windows[i][g].length > 0.0 && windows[i][g].contains_interior(mid)) {
          m.group[i][s] = g;
          break;
        }
  }
  return m;
}

}  // namespace

DsoSolution solve_dso(const Corridor& c, const ScheduleDelay& f) {
  DsoSolution sol;
  sol.windows = compute_windows(c, f);
  sol.derived = derive(c);
  const int n = c.n_bottlenecks();
  const int k = c.n_groups();

  sol.window_lengths.assign(n, std::vector<double>(k, 0.0));
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < k; ++g) sol.window_lengths[i][g] = sol.windows[i][g].length;

  // rho_{i,k} = sum_{l >= k} beta_bar^l * cbar(T_{i,l}) + d_i. The suffix sum
  // telescopes the boundary indifference rho_{i,k} - rho_{i,k+1} =
  // beta_bar^k cbar(T_{i,k}).
  sol.rho.assign(n, std::vector<double>(k, 0.0));
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int g = k - 1; g >= 0; --g) {
      acc += sol.derived.beta_bar[g] * sol.windows[i][g].cost;
      sol.rho[i][g] = acc + c.free_flow_times[i];
    }
  }

  sol.slices = build_slices(sol.windows);
  const SliceMap& sm = sol.slices;
  const int ns = sm.n_segments();

  // Price prefixes: S_i(t) = rho_{i,g} - beta^g c(t) - d_i on the group-g
  // slice of window i, zero outside. Individual prices follow by differencing.
  sol.price_prefix.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<PiecewiseCurve::Segment> segs(ns);
    for (int s = 0; s < ns; ++s) {
      int g = sm.group[i][s];
      if (g < 0) continue;
      segs[s] = {-c.betas[g], 0.0, sol.rho[i][g] - c.free_flow_times[i]};
    }
    PiecewiseCurve cur(sm.breaks, std::move(segs));
    cur.normalize();
    sol.price_prefix[i] = std::move(cur);
  }
  sol.prices.resize(n);
  for (int i = 0; i < n; ++i) {
    sol.prices[i] =
        i == 0 ? sol.price_prefix[0] : sol.price_prefix[i] - sol.price_prefix[i - 1];
    sol.prices[i].normalize();
  }

  // The construction is the optimum only while every price stays nonnegative
  // on its window (the support assumption behind the decomposition). A dip
  // below zero means the instance hides a false-bottleneck-like structure
  // that needs network reduction, which is out of scope here.
  // Segments never straddle the kink, so each one is monotone in t and the
  // breakpoint values bound the whole curve.
  for (int i = 0; i < n; ++i) {
    for (double t : sol.prices[i].breakpoints()) {
      if (sol.prices[i].eval(t, f, Side::Left) < -1e-9 ||
          sol.prices[i].eval(t, f, Side::Right) < -1e-9) {
        std::ostringstream os;
        os << "optimal-price support assumption fails: price of bottleneck " << i + 1
           << " dips negative near t = " << t
           << "; the corridor needs false-bottleneck reduction, which is not supported";
        throw InvalidCorridor(os.str());
      }
    }
  }

  // All-or-nothing flows: mu_bar_i on each group slice.
  sol.group_flows.assign(n, std::vector<PiecewiseCurve>(k));
  sol.agg_flows.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<PiecewiseCurve::Segment> agg(ns);
    for (int g = 0; g < k; ++g) {
      std::vector<PiecewiseCurve::Segment> segs(ns);
      for (int s = 0; s < ns; ++s)
        if (sm.group[i][s] == g) {
          segs[s] = {0.0, 0.0, sol.derived.mu_bar[i]};
          agg[s] = {0.0, 0.0, sol.derived.mu_bar[i]};
        }
      PiecewiseCurve cur(sm.breaks, std::move(segs));
      cur.normalize();
      sol.group_flows[i][g] = std::move(cur);
    }
    PiecewiseCurve cur(sm.breaks, std::move(agg));
    cur.normalize();
    sol.agg_flows[i] = std::move(cur);
  }

  sol.payments = 0.0;
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < k; ++g) sol.payments += c.demands[i][g] * sol.rho[i][g];
  sol.revenue = 0.0;
  for (int i = 0; i < n; ++i) sol.revenue += c.capacities[i] * sol.prices[i].integral(f);
  sol.total_cost = sol.payments - sol.revenue;
  return sol;
}

double total_cost_dso(const DsoSolution& s, const Corridor& c, const ScheduleDelay& f) {
  double payments = 0.0;
  const int n = c.n_bottlenecks();
  const int k = c.n_groups();
  for (int i = 0; i < n && i < static_cast<int>(s.rho.size()); ++i)
    for (int g = 0; g < k && g < static_cast<int>(s.rho[i].size()); ++g)
      payments += c.demands[i][g] * s.rho[i][g];
  double revenue = 0.0;
  for (int i = 0; i < static_cast<int>(s.prices.size()); ++i)
    revenue += c.capacities[i] * s.prices[i].integral(f);
  return payments - revenue;
}

}  // namespace corridor
