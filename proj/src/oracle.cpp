#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace corridor {

DiscreteLp discretize(const Corridor& c, const ScheduleDelay& f, double dt, double padding) {
  if (!(dt > 0.0)) throw SolverError("dt must be positive");
  if (padding < 0.0) throw SolverError("padding must be nonnegative");
  std::vector<std::vector<EqualCostWindow>> windows = compute_windows(c, f);
  const EqualCostWindow& h = windows.back().back();

  DiscreteLp d;
  d.n = c.n_bottlenecks();
  d.k = c.n_groups();
  d.t0 = h.t_minus - padding;
  d.dt = dt;
  d.n_bins = static_cast<int>(std::ceil((h.length + 2.0 * padding) / dt));

  double span = d.n_bins * dt;
  for (int i = 0; i < d.n; ++i) {
    double upstream_demand = 0.0;
    for (int j = i; j < d.n; ++j) upstream_demand += c.origin_demand(j);
    if (upstream_demand > c.capacities[i] * span) {
      std::ostringstream os;
      os << "horizon too small: bottleneck " << i + 1 << " can serve "
         << c.capacities[i] * span << " over the grid but upstream demand is "
         << upstream_demand;
      throw HorizonTooSmall(os.str());
    }
  }

  LpProblem& lp = d.lp;
  lp.n_eq = d.n * d.k;
  lp.n_le = d.n * d.n_bins;
  lp.rhs.assign(lp.n_eq + lp.n_le, 0.0);
  for (int i = 0; i < d.n; ++i)
    for (int g = 0; g < d.k; ++g) lp.rhs[d.demand_row(i, g)] = c.demands[i][g];
  for (int i = 0; i < d.n; ++i)
    for (int bin = 0; bin < d.n_bins; ++bin)
      lp.rhs[lp.n_eq + d.capacity_row(i, bin)] = c.capacities[i];

  lp.columns.resize(d.n * d.k * d.n_bins);
  lp.objective.resize(lp.columns.size());
  for (int i = 0; i < d.n; ++i)
    for (int g = 0; g < d.k; ++g)
      for (int bin = 0; bin < d.n_bins; ++bin) {
        int v = d.var(i, g, bin);
        // bin t_n stands for [t_n, t_n + dt); the cost is sampled at its left
        // edge, which keeps the discretization error cleanly first order
        lp.objective[v] = (c.betas[g] * f.cost(d.bin_time(bin)) + c.free_flow_times[i]) * dt;
        SparseColumn& col = lp.columns[v];
        col.idx.push_back(d.demand_row(i, g));
        col.val.push_back(dt);
        for (int ic = 0; ic <= i; ++ic) {
          col.idx.push_back(lp.n_eq + d.capacity_row(ic, bin));
          col.val.push_back(1.0);
        }
      }
  return d;
}

LpOracleResult solve_discrete(const DiscreteLp& d, long max_pivots) {
  LpSolution s = solve_lp(d.lp, max_pivots);
  LpOracleResult r;
  r.status = s.status;
  r.pivots = s.pivots;
  if (s.status != LpStatus::Optimal) return r;
  r.objective = s.objective;
  r.flows = std::move(s.x);
  r.duality_gap = s.duality_gap;
  r.rho_hat.assign(d.n, std::vector<double>(d.k, 0.0));
  for (int i = 0; i < d.n; ++i)
    for (int g = 0; g < d.k; ++g) r.rho_hat[i][g] = s.duals_eq[d.demand_row(i, g)];
  r.price_hat.assign(d.n, std::vector<double>(d.n_bins, 0.0));
  for (int i = 0; i < d.n; ++i)
    for (int bin = 0; bin < d.n_bins; ++bin)
      r.price_hat[i][bin] = -s.duals_le[d.capacity_row(i, bin)] / d.dt;
  return r;
}

OracleComparison compare_to_closed_form(const LpOracleResult& r, const DiscreteLp& d,
                                        const DsoSolution& dso, const ScheduleDelay& f) {
  OracleComparison cmp;
  cmp.lp_objective = r.objective;
  // Closed form value of the same objective: payments minus toll revenue.
  cmp.closed_form_objective = dso.total_cost;
  cmp.objective_gap_rel =
      std::abs(r.objective - cmp.closed_form_objective) / std::abs(cmp.closed_form_objective);

  for (int i = 0; i < d.n; ++i)
    for (int g = 0; g < d.k; ++g)
      cmp.max_rho_gap = std::max(cmp.max_rho_gap, std::abs(r.rho_hat[i][g] - dso.rho[i][g]));

  const std::vector<double>& breaks = dso.slices.breaks;
  for (int bin = 0; bin < d.n_bins; ++bin) {
    double lo = d.bin_time(bin), hi = lo + d.dt;
    bool straddles = false;
    for (double b : breaks)
      if (b > lo && b < hi) {
        straddles = true;
        break;
      }
    if (straddles) continue;
    double edge = d.bin_time(bin);  // where the bin's cost was sampled
    for (int i = 0; i < d.n; ++i)
      cmp.max_price_gap = std::max(
          cmp.max_price_gap, std::abs(r.price_hat[i][bin] - dso.prices[i].eval(edge, f)));
  }
  return cmp;
}

SubproblemOracle solve_subproblem(const Corridor& c, const ScheduleDelay& f,
                                  const DsoSolution& dso, int bottleneck, double dt) {
  const EqualCostWindow& w = dso.windows[bottleneck].back();
  const double mu_bar = dso.derived.mu_bar[bottleneck];
  const int k = c.n_groups();
  int bins = std::max(1, static_cast<int>(std::llround(w.length / dt)));
  double step = w.length / bins;  // grid exactly tiles the window

  // Transportation problem: group demands against bin capacities mu_bar*step.
  LpProblem lp;
  lp.n_eq = k;
  lp.n_le = bins;
  lp.rhs.assign(k + bins, 0.0);
  for (int g = 0; g < k; ++g) lp.rhs[g] = c.demands[bottleneck][g];
  for (int bin = 0; bin < bins; ++bin) lp.rhs[k + bin] = mu_bar;
  lp.columns.resize(k * bins);
  lp.objective.resize(k * bins);
  std::vector<double> bin_cost(bins);
  for (int bin = 0; bin < bins; ++bin)
    bin_cost[bin] = f.cost(w.t_minus + step * (bin + 0.5));
  for (int g = 0; g < k; ++g)
    for (int bin = 0; bin < bins; ++bin) {
      int v = g * bins + bin;
      lp.objective[v] = c.betas[g] * bin_cost[bin] * step;
      lp.columns[v].idx = {g, k + bin};
      lp.columns[v].val = {step, 1.0};
    }
  LpSolution s = solve_lp(lp);

  SubproblemOracle out;
  out.status = s.status;
  if (s.status == LpStatus::Optimal) out.lp_objective = s.objective;

  // Independent greedy: most schedule-sensitive groups take the cheapest bins
  // first (the sorted assignment is optimal for this cost structure).
  std::vector<int> order(bins);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return bin_cost[a] < bin_cost[b]; });
  double capacity = mu_bar * step;
  double greedy = 0.0;
  std::size_t cursor = 0;
  double room = capacity;
  for (int g = 0; g < k; ++g) {
    double remaining = c.demands[bottleneck][g];
    while (remaining > 1e-15 && cursor < order.size()) {
      double put = std::min(remaining, room);
      greedy += c.betas[g] * bin_cost[order[cursor]] * put;
      remaining -= put;
      room -= put;
      if (room <= 1e-15) {
        ++cursor;
        room = capacity;
      }
    }
  }
  out.greedy_objective = greedy;
  return out;
}

void dump_lp(const DiscreteLp& d, std::ostream& os) {
  const LpProblem& lp = d.lp;
  os << "rows " << lp.n_rows() << " (eq " << lp.n_eq << ", le " << lp.n_le << ") cols "
     << lp.n_vars() << "\n";
  os << "# objective: col value\n";
  for (int v = 0; v < lp.n_vars(); ++v) os << "c " << v << " " << lp.objective[v] << "\n";
  os << "# rhs: row value\n";
  for (int r = 0; r < lp.n_rows(); ++r) os << "b " << r << " " << lp.rhs[r] << "\n";
  os << "# matrix: row col value\n";
  for (int v = 0; v < lp.n_vars(); ++v)
    for (std::size_t q = 0; q < lp.columns[v].idx.size(); ++q)
      os << "a " << lp.columns[v].idx[q] << " " << v << " " << lp.columns[v].val[q] << "\n";
}

}  // namespace corridor
