#pragma once

#include <vector>

namespace corridor {

/// Sparse column over the row space (equality rows first, then <= rows).
struct SparseColumn {
  std::vector<int> idx;
  std::vector<double> val;
};

/// min c'x subject to (eq rows) A x = b, (le rows) G x <= h, x >= 0.
struct LpProblem {
  int n_eq = 0;
  int n_le = 0;
  std::vector<double> rhs;             // size n_eq + n_le, must be >= 0
  std::vector<double> objective;       // per structural column
  std::vector<SparseColumn> columns;   // structural columns

  int n_rows() const { return n_eq + n_le; }
  int n_vars() const { return static_cast<int>(columns.size()); }
};

enum class LpStatus { Optimal, Infeasible, IterLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterLimit;
  double objective = 0.0;
  std::vector<double> x;          // structural values
  std::vector<double> duals_eq;   // one per equality row
  std::vector<double> duals_le;   // one per <= row (<= 0 at optimum)
  double duality_gap = 0.0;       // |primal - dual| at Optimal
  long pivots = 0;
};

/// Two-phase revised primal simplex with a dense basis inverse. Dantzig
/// pricing with lowest-index tie-breaking, falling back to Bland's rule after
/// a degenerate stretch; fully deterministic for identical input.
LpSolution solve_lp(const LpProblem& lp, long max_pivots = 1000000);

}  // namespace corridor
