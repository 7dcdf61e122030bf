#pragma once

#include <vector>

#include "schedule.hpp"

namespace corridor {

/// Breakpointed analytic curve. On segment j (the half-open interval
/// [breaks[j], breaks[j+1])) the value is
///     a * c(t) + g * c'(t) + b
/// where c is the base schedule delay cost; the curve is 0 outside
/// [breaks.front(), breaks.back()]. Prices and queue delays use only (a, b);
/// flow rates additionally carry the slope term g.
class PiecewiseCurve {
 public:
  struct Segment {
    double a = 0.0;
    double g = 0.0;
    double b = 0.0;
    bool operator==(const Segment&) const = default;
  };

  PiecewiseCurve() = default;
  PiecewiseCurve(std::vector<double> breaks, std::vector<Segment> segments);

  bool empty() const { return segments_.empty(); }
  int n_segments() const { return static_cast<int>(segments_.size()); }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const Segment& segment(int j) const { return segments_[j]; }
  double support_lo() const { return breaks_.empty() ? 0.0 : breaks_.front(); }
  double support_hi() const { return breaks_.empty() ? 0.0 : breaks_.back(); }

  /// Right-continuous evaluation (value of the segment starting at or before t).
  double eval(double t, const ScheduleDelay& f) const { return eval(t, f, Side::Right); }
  /// One-sided evaluation: Side::Left gives the limit from below.
  double eval(double t, const ScheduleDelay& f, Side side) const;
  /// One-sided derivative d/dt [a c(t) + g c'(t) + b] = a c'(t) + g c''(t).
  double deriv(double t, const ScheduleDelay& f, Side side) const;

  /// Exact integral over the whole support (the g-term integrates to a
  /// difference of c; the a-term uses ScheduleDelay::integral_cost).
  double integral(const ScheduleDelay& f) const;
  double integral(const ScheduleDelay& f, double lo, double hi) const;

  PiecewiseCurve& operator+=(const PiecewiseCurve& o);
  PiecewiseCurve& operator-=(const PiecewiseCurve& o);
  PiecewiseCurve& operator*=(double s);
  friend PiecewiseCurve operator+(PiecewiseCurve l, const PiecewiseCurve& r) { return l += r; }
  friend PiecewiseCurve operator-(PiecewiseCurve l, const PiecewiseCurve& r) { return l -= r; }

  /// Max |left - right| over interior breakpoints (continuity check).
  double max_jump(const ScheduleDelay& f) const;

  /// Drops zero segments at both ends so the support is tight, and merges
  /// adjacent segments with identical descriptors.
  void normalize();

  /// Sample grid: all breakpoints plus `interior` evenly spaced points per
  /// segment.
  std::vector<double> sample_grid(int interior) const;

 private:
  int segment_index(double t, Side side) const;  // -1 when outside support

  std::vector<double> breaks_;      // size m+1 when m segments
  std::vector<Segment> segments_;   // size m
};

/// Union of two sorted breakpoint lists (exact comparison; builders produce
/// identical doubles for shared boundaries).
std::vector<double> merge_breaks(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace corridor
