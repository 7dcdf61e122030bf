#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace corridor {

enum class Side { Left, Right };

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};
struct NonConvergence : SolverError {
  using SolverError::SolverError;
};
struct InvalidCorridor : SolverError {
  using SolverError::SolverError;
};
struct QrpConditionViolated : SolverError {
  using SolverError::SolverError;
};
struct NonContiguousSubset : SolverError {
  using SolverError::SolverError;
};
struct HorizonTooSmall : SolverError {
  using SolverError::SolverError;
};

/// Equal-cost arrival window [t_minus, t_plus] of length `length` with
/// c(t_minus) = c(t_plus) = cost.
struct EqualCostWindow {
  double t_minus = 0.0;
  double t_plus = 0.0;
  double length = 0.0;
  double cost = 0.0;

  bool contains(double t) const { return t >= t_minus && t <= t_plus; }
  bool contains_interior(double t) const { return t > t_minus && t < t_plus; }
};

/// Base schedule delay cost c(t): c(0) = 0, strictly quasi-convex with the
/// minimum at the common preferred arrival time t = 0. Two families:
///   - piecewise linear: c(t) = early_slope*(-t) for t < 0, late_slope*t for t >= 0
///   - convex polynomial in even powers: c(t) = sum_m a_m t^(2m), m >= 1
class ScheduleDelay {
 public:
  static ScheduleDelay piecewise_linear(double early_slope, double late_slope);
  /// coeffs[m] multiplies t^(2(m+1)); all must be >= 0 and at least one > 0.
  static ScheduleDelay convex_polynomial(std::vector<double> coeffs);

  bool is_piecewise_linear() const { return piecewise_linear_; }
  double early_slope() const { return early_slope_; }
  double late_slope() const { return late_slope_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double cost(double t) const;
  /// One-sided derivative of c at t. The two sides differ only at kinks
  /// (t = 0 for the piecewise linear family).
  double slope(double t, Side side) const;

  /// Equal-cost window of length T: the unique [t-, t+] with t+ - t- = T and
  /// c(t-) = c(t+). Closed form for the piecewise linear family, bracketed
  /// bisection (abs tol 1e-10, max 200 iterations) otherwise.
  EqualCostWindow window(double T) const;
  double window_cost(double T) const { return window(T).cost; }

  /// Exact integral of c over [a, b] for the piecewise linear family,
  /// adaptive Simpson (tol 1e-9) otherwise.
  double integral_cost(double a, double b) const;

 private:
  ScheduleDelay() = default;

  bool piecewise_linear_ = true;
  double early_slope_ = 0.0;  // eta, in (0, 1)
  double late_slope_ = 0.0;   // lambda, > 0
  std::vector<double> coeffs_;
};

struct QrpViolation {
  int pair;  // adjacent bottleneck pair (pair, pair+1), 1-based downstream index
  double time;
  Side side;
  double slope;
  double margin;  // min distance to the open band, negative or ~0 when violating
};

struct QrpReport {
  bool holds = true;
  /// Minimum over pairs and sampled one-sided slopes of the distance to the
  /// band boundary; must exceed the strictness tolerance for `holds`.
  double worst_margin = 0.0;
  std::vector<QrpViolation> violating;
  std::string summary() const;
};

inline constexpr double kQrpStrictnessTol = 1e-12;

/// Checks mu_{i+1}/mu_i - 1 < c'(t) < mu_i/mu_{i+1} - 1 for every adjacent
/// pair and every sampled one-sided slope of c over [t_lo, t_hi].
QrpReport check_qrp_condition(const ScheduleDelay& f, std::span<const double> capacities,
                              double t_lo, double t_hi);

}  // namespace corridor
