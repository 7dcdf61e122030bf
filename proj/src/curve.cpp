#include "curve.hpp"

#include <algorithm>
#include <cmath>

namespace corridor {

namespace {

double second_slope(const ScheduleDelay& f, double t) {
  if (f.is_piecewise_linear()) return 0.0;
  double t2 = t * t, p = 1.0, v = 0.0;
  int e = 2;
  for (double a : f.coefficients()) {
    v += a * static_cast<double>(e) * static_cast<double>(e - 1) * p;
    p *= t2;
    e += 2;
  }
  return v;
}

}  // namespace

PiecewiseCurve::PiecewiseCurve(std::vector<double> breaks, std::vector<Segment> segments)
    : breaks_(std::move(breaks)), segments_(std::move(segments)) {
  if (breaks_.size() != segments_.size() + 1 && !(breaks_.empty() && segments_.empty()))
    throw SolverError("curve: breakpoints and segments out of sync");
  for (std::size_t j = 0; j + 1 < breaks_.size(); ++j)
    if (!(breaks_[j] < breaks_[j + 1])) throw SolverError("curve: breakpoints not increasing");
}

int PiecewiseCurve::segment_index(double t, Side side) const {
  if (segments_.empty()) return -1;
  if (side == Side::Right) {
    if (t < breaks_.front() || t >= breaks_.back()) return -1;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    return static_cast<int>(it - breaks_.begin()) - 1;
  }
  if (t <= breaks_.front() || t > breaks_.back()) return -1;
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
  return static_cast<int>(it - breaks_.begin()) - 1;
}

double PiecewiseCurve::eval(double t, const ScheduleDelay& f, Side side) const {
  int j = segment_index(t, side);
  if (j < 0) return 0.0;
  const Segment& s = segments_[j];
  double v = s.b;
  if (s.a != 0.0) v += s.a * f.cost(t);
  if (s.g != 0.0) v += s.g * f.slope(t, side);
  return v;
}

double PiecewiseCurve::deriv(double t, const ScheduleDelay& f, Side side) const {
  int j = segment_index(t, side);
  if (j < 0) return 0.0;
  const Segment& s = segments_[j];
  double v = 0.0;
  if (s.a != 0.0) v += s.a * f.slope(t, side);
  if (s.g != 0.0) v += s.g * second_slope(f, t);
  return v;
}

double PiecewiseCurve::integral(const ScheduleDelay& f) const {
  if (segments_.empty()) return 0.0;
  return integral(f, breaks_.front(), breaks_.back());
}

double PiecewiseCurve::integral(const ScheduleDelay& f, double lo, double hi) const {
  if (segments_.empty() || hi <= lo) return 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < segments_.size(); ++j) {
    double x = std::max(lo, breaks_[j]);
    double y = std::min(hi, breaks_[j + 1]);
    if (y <= x) continue;
    const Segment& s = segments_[j];
    total += s.b * (y - x);
    if (s.a != 0.0) total += s.a * f.integral_cost(x, y);
    if (s.g != 0.0) total += s.g * (f.cost(y) - f.cost(x));
  }
  return total;
}

std::vector<double> merge_breaks(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out;
  out.reserve(x.size() + y.size());
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewiseCurve& PiecewiseCurve::operator+=(const PiecewiseCurve& o) {
  if (o.segments_.empty()) return *this;
  if (segments_.empty()) {
    *this = o;
    return *this;
  }
  std::vector<double> breaks = merge_breaks(breaks_, o.breaks_);
  std::vector<Segment> segs(breaks.size() - 1);
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    double mid = 0.5 * (breaks[j] + breaks[j + 1]);
    Segment s;
    int a = segment_index(mid, Side::Right);
    int b = o.segment_index(mid, Side::Right);
    if (a >= 0) {
      s.a += segments_[a].a;
      s.g += segments_[a].g;
      s.b += segments_[a].b;
    }
    if (b >= 0) {
      s.a += o.segments_[b].a;
      s.g += o.segments_[b].g;
      s.b += o.segments_[b].b;
    }
    segs[j] = s;
  }
  breaks_ = std::move(breaks);
  segments_ = std::move(segs);
  return *this;
}

PiecewiseCurve& PiecewiseCurve::operator*=(double s) {
  for (auto& seg : segments_) {
    seg.a *= s;
    seg.g *= s;
    seg.b *= s;
  }
  return *this;
}

PiecewiseCurve& PiecewiseCurve::operator-=(const PiecewiseCurve& o) {
  PiecewiseCurve neg = o;
  neg *= -1.0;
  return *this += neg;
}

double PiecewiseCurve::max_jump(const ScheduleDelay& f) const {
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < breaks_.size(); ++j) {
    double t = breaks_[j];
    worst = std::max(worst, std::abs(eval(t, f, Side::Left) - eval(t, f, Side::Right)));
  }
  return worst;
}

void PiecewiseCurve::normalize() {
  auto is_zero = [](const Segment& s) { return s.a == 0.0 && s.g == 0.0 && s.b == 0.0; };
  std::size_t lo = 0;
  while (lo < segments_.size() && is_zero(segments_[lo])) ++lo;
  std::size_t hi = segments_.size();
  while (hi > lo && is_zero(segments_[hi - 1])) --hi;
  if (lo > 0 || hi < segments_.size()) {
    segments_ = std::vector<Segment>(segments_.begin() + lo, segments_.begin() + hi);
    breaks_ = std::vector<double>(breaks_.begin() + lo, breaks_.begin() + lo + segments_.size() +
                                                            (segments_.empty() ? 0 : 1));
  }
  if (segments_.empty()) {
    breaks_.clear();
    return;
  }
  std::vector<double> breaks{breaks_.front()};
  std::vector<Segment> segs;
  for (std::size_t j = 0; j < segments_.size(); ++j) {
    // c has its kink at 0; that breakpoint must survive merging or grids
    // built from the curve would miss the interior extremum there.
    if (!segs.empty() && segs.back() == segments_[j] && breaks_[j] != 0.0)
      breaks.back() = breaks_[j + 1];  // extend the previous run
    else {
      segs.push_back(segments_[j]);
      breaks.push_back(breaks_[j + 1]);
    }
  }
  breaks_ = std::move(breaks);
  segments_ = std::move(segs);
}

std::vector<double> PiecewiseCurve::sample_grid(int interior) const {
  std::vector<double> out;
  if (segments_.empty()) return out;
  for (std::size_t j = 0; j < segments_.size(); ++j) {
    out.push_back(breaks_[j]);
    for (int q = 1; q <= interior; ++q)
      out.push_back(breaks_[j] + (breaks_[j + 1] - breaks_[j]) * q / (interior + 1));
  }
  out.push_back(breaks_.back());
  return out;
}

}  // namespace corridor
