#include "foldfinder/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "foldfinder/errors.hpp"

namespace foldfinder {

LpResult simplex_maximize(const VectorXd& c, const MatrixXd& A,
                          const VectorXd& b, long pivot_cap) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n)
    throw Error("simplex: inconsistent dimensions");
  for (Eigen::Index i = 0; i < m; ++i)
    if (!(b[i] >= 0))
      throw Error("simplex: negative right-hand side (slack start infeasible)");

  // Row equilibration keeps the pivot tolerance meaningful when constraint
  // scales differ by orders of magnitude.
  VectorXd row_scale(m);
  MatrixXd T(m, n + m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    double s = std::max(A.row(i).cwiseAbs().maxCoeff(), std::abs(b[i]));
    row_scale[i] = s > 0 ? s : 1.0;
    T.block(i, 0, 1, n) = A.row(i) / row_scale[i];
    T.block(i, n, 1, m).setZero();
    T(i, n + i) = 1.0;
    T(i, n + m) = b[i] / row_scale[i];
  }

  VectorXd cost = VectorXd::Zero(n + m + 1);
  cost.head(n) = -c;  // maximize c'x == minimize -c'x
  const double cost_tol = 1e-11 * (1.0 + c.cwiseAbs().maxCoeff());
  const double pivot_tol = 1e-9;

  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  LpResult res;
  double prev_objective = 0.0;
  long stalls = 0;
  bool bland = false;
  for (long pivots = 0; pivots < pivot_cap; ++pivots) {
    // Entering column.
    Eigen::Index enter = -1;
    if (bland) {
      for (Eigen::Index j = 0; j < n + m; ++j)
        if (cost[j] < -cost_tol) {
          enter = j;
          break;
        }
    } else {
      double best = -cost_tol;
      for (Eigen::Index j = 0; j < n + m; ++j)
        if (cost[j] < best) {
          best = cost[j];
          enter = j;
        }
    }
    if (enter < 0) {
      res.status = LpResult::Status::kOptimal;
      break;
    }

    // Ratio test; ties go to the smallest basis index (anti-cycling).
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      double a = T(i, enter);
      if (a <= pivot_tol) continue;
      double ratio = T(i, n + m) / a;
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 &&
           (leave < 0 || basis[i] < basis[leave]))) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave < 0) {
      res.status = LpResult::Status::kUnbounded;
      res.pivots = pivots;
      return res;
    }

    // Pivot.
    double p = T(leave, enter);
    T.row(leave) /= p;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    double fc = cost[enter];
    if (fc != 0.0) cost -= fc * T.row(leave).transpose();
    basis[leave] = enter;
    res.pivots = pivots + 1;

    double objective = cost[n + m];  // cell tracks the maximized value
    if (objective <= prev_objective + 1e-14 * (1.0 + std::abs(objective))) {
      if (++stalls > 2 * m) bland = true;  // degenerate cycle guard
    } else {
      stalls = 0;
    }
    prev_objective = objective;
    if (pivots + 1 == pivot_cap) res.status = LpResult::Status::kIterationCap;
  }

  res.x = VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = T(i, n + m);
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace foldfinder
