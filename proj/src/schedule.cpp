#include "schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace corridor {

namespace {

constexpr double kRootTol = 1e-10;
constexpr int kMaxBisection = 200;

double simpson(const ScheduleDelay&, double a, double, double b, double fa, double fm,
               double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const ScheduleDelay& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f.cost(lm), frm = f.cost(rm);
  double left = simpson(f, a, lm, m, fa, flm, fm);
  double right = simpson(f, m, rm, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

ScheduleDelay ScheduleDelay::piecewise_linear(double early_slope, double late_slope) {
  if (!(early_slope > 0.0) || !(late_slope > 0.0))
    throw SolverError("schedule delay slopes must be positive");
  if (!(early_slope < 1.0))
    throw SolverError("early slope must be < 1 (dc/dt > -1)");
  ScheduleDelay f;
  f.piecewise_linear_ = true;
  f.early_slope_ = early_slope;
  f.late_slope_ = late_slope;
  return f;
}

ScheduleDelay ScheduleDelay::convex_polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw SolverError("polynomial family needs at least one coefficient");
  bool any = false;
  for (double a : coeffs) {
    if (a < 0.0) throw SolverError("polynomial coefficients must be nonnegative");
    if (a > 0.0) any = true;
  }
  if (!any) throw SolverError("polynomial family needs a positive coefficient");
  ScheduleDelay f;
  f.piecewise_linear_ = false;
  f.coeffs_ = std::move(coeffs);
  return f;
}

double ScheduleDelay::cost(double t) const {
  if (piecewise_linear_) return t < 0.0 ? -early_slope_ * t : late_slope_ * t;
  double t2 = t * t, p = t2, v = 0.0;
  for (double a : coeffs_) {
    v += a * p;
    p *= t2;
  }
  return v;
}

double ScheduleDelay::slope(double t, Side side) const {
  if (piecewise_linear_) {
    if (t < 0.0 || (t == 0.0 && side == Side::Left)) return -early_slope_;
    return late_slope_;
  }
  // Even powers only: derivative is odd and continuous, sides agree.
  double t2 = t * t, p = t, v = 0.0;
  int e = 2;
  for (double a : coeffs_) {
    v += a * static_cast<double>(e) * p;
    p *= t2;
    e += 2;
  }
  return v;
}

EqualCostWindow ScheduleDelay::window(double T) const {
  if (T < 0.0) throw SolverError("window length must be nonnegative");
  EqualCostWindow w;
  w.length = T;
  if (T == 0.0) return w;
  if (piecewise_linear_) {
    double s = early_slope_ + late_slope_;
    w.t_minus = -late_slope_ * T / s;
    w.t_plus = early_slope_ * T / s;
    w.cost = early_slope_ * late_slope_ * T / s;
    return w;
  }
  // Solve c(x) = c(x + T) for x in [-T, 0]; the difference is strictly
  // decreasing there, so the bracket is valid.
  double lo = -T, hi = 0.0;
  auto g = [&](double x) { return cost(x) - cost(x + T); };
  double glo = g(lo);
  if (!(glo >= 0.0)) throw NonConvergence("window bracket invalid (malformed family)");
  for (int it = 0; it < kMaxBisection; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= kRootTol) break;
  }
  if (hi - lo > kRootTol) throw NonConvergence("window bisection did not converge");
  w.t_minus = 0.5 * (lo + hi);
  w.t_plus = w.t_minus + T;
  w.cost = 0.5 * (cost(w.t_minus) + cost(w.t_plus));
  return w;
}

double ScheduleDelay::integral_cost(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -integral_cost(b, a);
  if (piecewise_linear_) {
    // Split at the kink; each side integrates a triangle strip exactly.
    auto one_sided = [&](double x, double y) {
      // [x, y] entirely on one side of 0
      if (y <= 0.0) return 0.5 * early_slope_ * (x * x - y * y);
      return 0.5 * late_slope_ * (y * y - x * x);
    };
    if (b <= 0.0 || a >= 0.0) return one_sided(a, b);
    return one_sided(a, 0.0) + one_sided(0.0, b);
  }
  double fa = cost(a), fb = cost(b), fm = cost(0.5 * (a + b));
  double whole = simpson(*this, a, 0.5 * (a + b), b, fa, fm, fb);
  return adaptive_simpson(*this, a, b, fa, fm, fb, whole, 1e-9, 48);
}

std::string QrpReport::summary() const {
  std::ostringstream os;
  if (holds)
    os << "QRP condition holds, margin " << worst_margin;
  else {
    os << "QRP condition violated (margin " << worst_margin << ")";
    if (!violating.empty()) {
      const auto& v = violating.front();
      os << " at pair (" << v.pair << "," << v.pair + 1 << ") t=" << v.time
         << " slope=" << v.slope;
    }
  }
  return os.str();
}

QrpReport check_qrp_condition(const ScheduleDelay& f, std::span<const double> capacities,
                              double t_lo, double t_hi) {
  if (capacities.empty()) throw SolverError("no capacities");
  for (double mu : capacities)
    if (!(mu > 0.0)) throw SolverError("capacities must be positive");
  if (!(t_hi > t_lo)) throw SolverError("degenerate horizon");

  QrpReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  if (capacities.size() < 2) return report;  // no adjacent pair: holds vacuously

  // Sampled one-sided slopes. The piecewise linear family has exactly the two
  // segment slopes plus both sides of the kink; general families are sampled
  // densely including endpoints.
  std::vector<std::pair<double, Side>> samples;
  if (f.is_piecewise_linear()) {
    samples = {{t_lo, Side::Right}, {0.0, Side::Left}, {0.0, Side::Right}, {t_hi, Side::Left}};
  } else {
    const int n = 512;
    samples.reserve(2 * (n + 1));
    for (int j = 0; j <= n; ++j) {
      double t = t_lo + (t_hi - t_lo) * j / n;
      samples.push_back({t, Side::Left});
      samples.push_back({t, Side::Right});
    }
  }

  for (std::size_t i = 0; i + 1 < capacities.size(); ++i) {
    double lower = capacities[i + 1] / capacities[i] - 1.0;
    double upper = capacities[i] / capacities[i + 1] - 1.0;
    for (auto [t, side] : samples) {
      if (t < t_lo || t > t_hi) continue;
      double s = f.slope(t, side);
      double margin = std::min(s - lower, upper - s);
      if (margin < report.worst_margin) report.worst_margin = margin;
      if (margin <= kQrpStrictnessTol)
        report.violating.push_back({static_cast<int>(i) + 1, t, side, s, margin});
    }
  }
  report.holds = report.violating.empty();
  return report;
}

}  // namespace corridor
