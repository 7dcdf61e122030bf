#include "network.hpp"

#include <numeric>
#include <sstream>

namespace corridor {

double Corridor::origin_demand(int i) const {
  return std::accumulate(demands[i].begin(), demands[i].end(), 0.0);
}

double Corridor::total_demand() const {
  double q = 0.0;
  for (int i = 0; i < n_bottlenecks(); ++i) q += origin_demand(i);
  return q;
}

std::string Diagnostics::text() const {
  std::ostringstream os;
  if (ok) {
    os << "corridor valid";
  } else {
    os << "corridor invalid:";
    for (const auto& v : violations) os << "\n  - " << v;
  }
  return os.str();
}

Diagnostics validate(const Corridor& c) {
  Diagnostics d;
  auto fail = [&](const std::string& msg) {
    d.ok = false;
    d.violations.push_back(msg);
  };
  std::ostringstream os;

  const int n = c.n_bottlenecks();
  const int k = c.n_groups();
  if (n == 0) fail("no bottlenecks");
  if (k == 0) fail("no commuter groups");
  if (static_cast<int>(c.free_flow_times.size()) != n)
    fail("free_flow_times size != number of bottlenecks");
  if (static_cast<int>(c.demands.size()) != n) fail("demands must have one row per origin");
  for (int i = 0; i < static_cast<int>(c.demands.size()); ++i)
    if (static_cast<int>(c.demands[i].size()) != k) {
      os.str("");
      os << "demand row " << i + 1 << " must have one entry per group";
      fail(os.str());
    }
  if (!d.ok) return d;  // shape errors make index checks meaningless

  for (int i = 0; i < n; ++i)
    if (!(c.capacities[i] > 0.0)) {
      os.str("");
      os << "mu_" << i + 1 << " = " << c.capacities[i] << " <= 0";
      fail(os.str());
    }
  for (int i = 0; i + 1 < n; ++i)
    if (!(c.capacities[i] - c.capacities[i + 1] > 0.0)) {
      os.str("");
      os << "mu_bar_" << i + 1 << " = " << c.capacities[i] - c.capacities[i + 1]
         << " <= 0 (false-bottleneck necessary condition)";
      fail(os.str());
    }
  for (int i = 0; i + 1 < n; ++i)
    if (!(c.free_flow_times[i] < c.free_flow_times[i + 1])) {
      os.str("");
      os << "d_" << i + 2 << " - d_" << i + 1 << " = "
         << c.free_flow_times[i + 1] - c.free_flow_times[i] << " <= 0 (d not strictly increasing)";
      fail(os.str());
    }
  if (c.betas.empty() || c.betas[0] != 1.0) fail("beta^1 must equal 1");
  for (int g = 0; g < k; ++g)
    if (!(c.betas[g] > 0.0 && c.betas[g] <= 1.0)) {
      os.str("");
      os << "beta^" << g + 1 << " = " << c.betas[g] << " outside (0, 1]";
      fail(os.str());
    }
  for (int g = 0; g + 1 < k; ++g)
    if (!(c.betas[g] > c.betas[g + 1])) {
      os.str("");
      os << "beta not strictly decreasing at k=" << g + 1;
      fail(os.str());
    }
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int g = 0; g < k; ++g) {
      if (c.demands[i][g] < 0.0) {
        os.str("");
        os << "Q_{" << i + 1 << "," << g + 1 << "} = " << c.demands[i][g] << " < 0";
        fail(os.str());
      }
      row += c.demands[i][g];
    }
    if (!(row > 0.0)) {
      os.str("");
      os << "origin " << i + 1 << " has zero total demand";
      fail(os.str());
    }
  }
  return d;
}

DerivedQuantities derive(const Corridor& c) {
  Diagnostics d = validate(c);
  if (!d.ok) throw InvalidCorridor(d.text());
  DerivedQuantities out;
  const int n = c.n_bottlenecks();
  const int k = c.n_groups();
  out.mu_bar.resize(n);
  for (int i = 0; i < n; ++i)
    out.mu_bar[i] = c.capacities[i] - (i + 1 < n ? c.capacities[i + 1] : 0.0);
  out.beta_bar.resize(k);
  for (int g = 0; g < k; ++g) out.beta_bar[g] = c.betas[g] - (g + 1 < k ? c.betas[g + 1] : 0.0);
  out.cum_demand.assign(n, std::vector<double>(k, 0.0));
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int g = 0; g < k; ++g) {
      acc += c.demands[i][g];
      out.cum_demand[i][g] = acc;
    }
  }
  return out;
}

}  // namespace corridor
