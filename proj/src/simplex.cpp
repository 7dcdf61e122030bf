#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corridor {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kReducedCostTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr int kDegenerateStreak = 200;

// Column ids: [0, n) structural, [n, n + n_le) slacks, then artificials
// (one per equality row).
class Tableau {
 public:
  explicit Tableau(const LpProblem& lp)
      : lp_(lp),
        m_(lp.n_rows()),
        n_struct_(lp.n_vars()),
        n_slack_(lp.n_le),
        binv_(static_cast<std::size_t>(m_) * m_, 0.0),
        xb_(m_, 0.0),
        basis_(m_),
        y_(m_, 0.0) {
    for (int r = 0; r < m_; ++r) binv_[idx(r, r)] = 1.0;
    // Initial basis: slacks on <= rows, artificials on equality rows.
    for (int r = 0; r < lp.n_eq; ++r) basis_[r] = n_struct_ + n_slack_ + r;
    for (int r = 0; r < n_slack_; ++r) basis_[lp.n_eq + r] = n_struct_ + r;
    for (int r = 0; r < m_; ++r) xb_[r] = lp.rhs[r];
  }

  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * m_ + c; }
  int artificial_base() const { return n_struct_ + n_slack_; }

  double column_cost(int col, bool phase1) const {
    if (phase1) return col >= artificial_base() ? 1.0 : 0.0;
    return col < n_struct_ ? lp_.objective[col] : 0.0;
  }

  void compute_duals(bool phase1) {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (int r = 0; r < m_; ++r) {
      double cb = column_cost(basis_[r], phase1);
      if (cb == 0.0) continue;
      const double* row = &binv_[idx(r, 0)];
      for (int j = 0; j < m_; ++j) y_[j] += cb * row[j];
    }
  }

  double reduced_cost(int col, bool phase1) const {
    double rc = column_cost(col, phase1);
    if (col < n_struct_) {
      const SparseColumn& a = lp_.columns[col];
      for (std::size_t q = 0; q < a.idx.size(); ++q) rc -= y_[a.idx[q]] * a.val[q];
    } else if (col < artificial_base()) {
      rc -= y_[lp_.n_eq + (col - n_struct_)];
    } else {
      rc -= y_[col - artificial_base()];
    }
    return rc;
  }

  // d = B^-1 * a_col
  void ftran(int col, std::vector<double>& d) const {
    std::fill(d.begin(), d.end(), 0.0);
    auto add_unit = [&](int row) {
      for (int r = 0; r < m_; ++r) d[r] += binv_[idx(r, row)];
    };
    if (col < n_struct_) {
      const SparseColumn& a = lp_.columns[col];
      for (std::size_t q = 0; q < a.idx.size(); ++q) {
        double v = a.val[q];
        int row = a.idx[q];
        for (int r = 0; r < m_; ++r) d[r] += v * binv_[idx(r, row)];
      }
    } else if (col < artificial_base()) {
      add_unit(lp_.n_eq + (col - n_struct_));
    } else {
      add_unit(col - artificial_base());
    }
  }

  // Runs one phase; returns true when the phase reached its optimum.
  bool run(bool phase1, long max_pivots, long& pivots) {
    std::vector<double> d(m_);
    int degenerate_run = 0;
    bool bland = false;
    while (pivots < max_pivots) {
      compute_duals(phase1);
      int enter = -1;
      double best = -kReducedCostTol;
      const int n_cols = artificial_base();  // artificials never re-enter
      for (int col = 0; col < n_cols; ++col) {
        double rc = reduced_cost(col, phase1);
        if (bland) {
          if (rc < -kReducedCostTol) {
            enter = col;
            break;
          }
        } else if (rc < best) {
          best = rc;
          enter = col;
        }
      }
      if (enter < 0) return true;

      ftran(enter, d);
      int leave = -1;
      double theta = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (d[r] > kPivotTol) {
          double ratio = xb_[r] / d[r];
          if (leave < 0 || ratio < theta - 1e-12 ||
              (ratio < theta + 1e-12 && basis_[r] < basis_[leave])) {
            leave = r;
            theta = ratio;
          }
        }
      }
      if (leave < 0) {
        // Unbounded direction; cannot happen for the bounded instances the
        // oracle builds, treat as a hard error.
        throw std::runtime_error("simplex: unbounded direction");
      }

      for (int r = 0; r < m_; ++r) xb_[r] -= theta * d[r];
      xb_[leave] = theta;
      basis_[leave] = enter;

      double piv = d[leave];
      double* lrow = &binv_[idx(leave, 0)];
      for (int j = 0; j < m_; ++j) lrow[j] /= piv;
      for (int r = 0; r < m_; ++r) {
        if (r == leave) continue;
        double factor = d[r];
        if (factor == 0.0) continue;
        double* row = &binv_[idx(r, 0)];
        for (int j = 0; j < m_; ++j) row[j] -= factor * lrow[j];
      }

      ++pivots;
      if (theta <= kPivotTol) {
        if (++degenerate_run >= kDegenerateStreak) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
    return false;
  }

  double basic_objective(bool phase1) const {
    double v = 0.0;
    for (int r = 0; r < m_; ++r) v += column_cost(basis_[r], phase1) * xb_[r];
    return v;
  }

  // Pivots basic artificials out wherever their row touches a real column, so
  // phase 2 can never move them off zero. Rows with no real support are
  // redundant and keep their artificial harmlessly at zero.
  void drive_out_artificials() {
    std::vector<double> d(m_);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < artificial_base()) continue;
      const double* row = &binv_[idx(r, 0)];
      int pick = -1;
      for (int col = 0; col < artificial_base() && pick < 0; ++col) {
        double dot = 0.0;
        if (col < n_struct_) {
          const SparseColumn& a = lp_.columns[col];
          for (std::size_t q = 0; q < a.idx.size(); ++q) dot += row[a.idx[q]] * a.val[q];
        } else {
          dot = row[lp_.n_eq + (col - n_struct_)];
        }
        if (std::abs(dot) > 1e-8) pick = col;
      }
      if (pick < 0) continue;
      ftran(pick, d);
      double piv = d[r];
      basis_[r] = pick;
      double* lrow = &binv_[idx(r, 0)];
      for (int j = 0; j < m_; ++j) lrow[j] /= piv;
      for (int rr = 0; rr < m_; ++rr) {
        if (rr == r) continue;
        double factor = d[rr];
        if (factor == 0.0) continue;
        double* orow = &binv_[idx(rr, 0)];
        for (int j = 0; j < m_; ++j) orow[j] -= factor * lrow[j];
      }
    }
  }

  const LpProblem& lp_;
  int m_, n_struct_, n_slack_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<int> basis_;
  std::vector<double> y_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& lp, long max_pivots) {
  Tableau t(lp);
  LpSolution sol;

  if (lp.n_eq > 0) {
    if (!t.run(true, max_pivots, sol.pivots)) {
      sol.status = LpStatus::IterLimit;
      return sol;
    }
    if (t.basic_objective(true) > kFeasTol) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    t.drive_out_artificials();
  }
  if (!t.run(false, max_pivots, sol.pivots)) {
    sol.status = LpStatus::IterLimit;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.x.assign(lp.n_vars(), 0.0);
  for (int r = 0; r < lp.n_rows(); ++r)
    if (t.basis_[r] < lp.n_vars()) sol.x[t.basis_[r]] = t.xb_[r];
  sol.objective = t.basic_objective(false);

  t.compute_duals(false);
  sol.duals_eq.assign(t.y_.begin(), t.y_.begin() + lp.n_eq);
  sol.duals_le.assign(t.y_.begin() + lp.n_eq, t.y_.end());
  double dual_obj = 0.0;
  for (int r = 0; r < lp.n_rows(); ++r) dual_obj += t.y_[r] * lp.rhs[r];
  sol.duality_gap = std::abs(sol.objective - dual_obj);
  return sol;
}

}  // namespace corridor
