#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "policies.hpp"
#include "dso.hpp"

namespace corridor {

namespace {

RandomInstance draw_instance(std::mt19937_64& rng) {
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  RandomInstance inst;
  const int n = uniform_int(1, 5);
  const int k = uniform_int(1, 4);

  Corridor& c = inst.corridor;
  c.capacities.assign(n, 0.0);
  c.capacities[n - 1] = uniform(0.5, 2.0);
  for (int i = n - 2; i >= 0; --i) c.capacities[i] = c.capacities[i + 1] + uniform(0.3, 1.5);

  c.free_flow_times.assign(n, 0.0);
  c.free_flow_times[0] = uniform(0.0, 1.0);
  for (int i = 1; i < n; ++i) c.free_flow_times[i] = c.free_flow_times[i - 1] + uniform(0.1, 1.0);

  c.betas.assign(k, 1.0);
  for (int g = 1; g < k; ++g) c.betas[g] = c.betas[g - 1] * uniform(0.4, 0.9);

  // Aggregate windows must strictly nest: pick increasing lengths and size
  // the demand rows accordingly; some groups may be empty.
  std::vector<double> lengths(n);
  lengths[0] = uniform(0.5, 2.0);
  for (int i = 1; i < n; ++i) lengths[i] = lengths[i - 1] * uniform(1.15, 1.8);
  c.demands.assign(n, std::vector<double>(k, 0.0));
  for (int i = 0; i < n; ++i) {
    double mu_bar = c.capacities[i] - (i + 1 < n ? c.capacities[i + 1] : 0.0);
    double total = lengths[i] * mu_bar;
    std::vector<double> weights(k);
    double sum = 0.0;
    for (int g = 0; g < k; ++g) {
      weights[g] = uniform(0.0, 1.0) < 0.2 ? 0.0 : uniform(0.2, 1.0);
      sum += weights[g];
    }
    if (sum == 0.0) {
      weights[uniform_int(0, k - 1)] = 1.0;
      sum = 1.0;
    }
    for (int g = 0; g < k; ++g) c.demands[i][g] = total * weights[g] / sum;
  }

  // Slopes strictly inside the QRP band of every adjacent pair.
  double lower = -1.0, upper = 3.0;
  for (int i = 0; i + 1 < n; ++i) {
    lower = std::max(lower, c.capacities[i + 1] / c.capacities[i] - 1.0);
    upper = std::min(upper, c.capacities[i] / c.capacities[i + 1] - 1.0);
  }
  if (uniform(0.0, 1.0) < 0.15) {
    // Quadratic cost: Gamma windows are symmetric, so the extreme slopes sit
    // at the widest window's edges, +-a2*T_max.
    double t_edge = 0.5 * lengths[n - 1];
    double cap = std::min(-lower, upper) * uniform(0.2, 0.85);
    inst.schedule = ScheduleDelay::convex_polynomial({cap / (2.0 * t_edge)});
  } else {
    double eta = -lower * uniform(0.2, 0.85);
    eta = std::min(eta, 0.95);  // dc/dt > -1 regardless of the band
    double lambda = std::min(upper, 3.0) * uniform(0.2, 0.85);
    inst.schedule = ScheduleDelay::piecewise_linear(eta, lambda);
  }
  return inst;
}

}  // namespace

RandomInstance random_instance(std::mt19937_64& rng) {
  // Rejection sampling: demand profiles whose group windows interleave badly
  // across origins break the optimal-price support assumption and are not
  // solvable by the closed form; redraw those.
  for (int attempt = 0; attempt < 200; ++attempt) {
    RandomInstance inst = draw_instance(rng);
    try {
      (void)solve_dso(inst.corridor, inst.schedule);
      return inst;
    } catch (const InvalidCorridor&) {
      continue;
    }
  }
  throw SolverError("random instance generation kept violating the support assumption");
}

SelftestResult run_selftest(std::uint64_t seed, int count, double tol) {
  std::mt19937_64 rng(seed);
  SelftestResult res;
  std::ostringstream log;

  for (int trial = 0; trial < count; ++trial) {
    RandomInstance inst = random_instance(rng);
    const Corridor& c = inst.corridor;
    const ScheduleDelay& f = inst.schedule;
    ++res.instances;
    auto fail = [&](const std::string& what) {
      ++res.failures;
      log << "instance " << trial << " (seed " << seed << "): " << what << "\n";
    };

    try {
      DsoSolution dso = solve_dso(c, f);
      DueSolution due = construct_due(dso, c, f);

      GridSpec grid;
      grid.interior_per_segment = 16;  // piecewise-analytic residuals are flat per segment
      ResidualReport due_rep = verify_due(due, c, f, grid);
      double worst = std::max({due_rep.max_dtc, due_rep.max_queue, due_rep.max_conservation,
                               due_rep.max_flow_negativity});
      res.worst_residual = std::max(res.worst_residual, worst);
      if (!due_rep.pass(tol)) fail("no-policy equilibrium residuals: " + due_rep.text());

      const int n = c.n_bottlenecks();
      std::uniform_int_distribution<int> pick_ip(1, n + 1);
      std::vector<int> pbp_subset;
      for (int i = pick_ip(rng); i <= n; ++i) pbp_subset.push_back(i);
      std::vector<int> ramp_subset;
      for (int i = 1; i <= n; ++i)
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5) ramp_subset.push_back(i);

      std::vector<PolicySpec> specs = {
          {StateKind::Dso, {}},          {StateKind::Rp, {}},
          {StateKind::Rm, {}},           {StateKind::Pbp, pbp_subset},
          {StateKind::Prm, ramp_subset}, {StateKind::Prp, ramp_subset},
      };
      double inst_rho_gap = 0.0;
      for (const auto& spec : specs) {
        PolicySolution ps = solve_policy(dso, due, c, f, spec);
        ResidualReport rep = verify_policy(ps, dso, c, f, grid);
        double w = std::max(
            {rep.max_dtc, rep.max_queue, rep.max_conservation, rep.max_flow_negativity});
        res.worst_residual = std::max(res.worst_residual, w);
        if (!rep.pass(tol))
          fail(std::string(state_name(spec.kind)) + " residuals: " + rep.text());
        for (int i = 0; i < n; ++i)
          for (int g = 0; g < c.n_groups(); ++g)
            inst_rho_gap = std::max(inst_rho_gap, std::abs(ps.rho[i][g] - dso.rho[i][g]));
      }
      res.worst_rho_gap = std::max(res.worst_rho_gap, inst_rho_gap);
      if (inst_rho_gap > 1e-10) fail("commuting-cost invariance violated");

      Comparison cmp = compare_policies(c, f, specs);
      for (const auto& msg : cmp.ordering_failures) fail("ordering: " + msg);
    } catch (const SolverError& e) {
      fail(std::string("exception: ") + e.what());
    }
  }

  std::ostringstream head;
  head << res.instances << " randomized instances, " << res.failures
       << " failures; worst residual " << res.worst_residual << ", worst commuting-cost gap "
       << res.worst_rho_gap << "\n";
  res.report = head.str() + log.str();
  return res;
}

}  // namespace corridor
