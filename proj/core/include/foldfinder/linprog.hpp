#pragma once

#include <Eigen/Dense>

namespace foldfinder {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Outcome of a small dense LP solve.
struct LpResult {
  enum class Status { kOptimal, kUnbounded, kIterationCap };
  Status status = Status::kOptimal;
  VectorXd x;
  double objective = 0.0;
  long pivots = 0;
};

// Maximizes c'x subject to A x <= b, x >= 0 with b >= 0 (so the slack basis
// is feasible and no phase-1 is needed). Dense tableau simplex with Dantzig
// pricing and a Bland fallback against cycling; rows are equilibrated before
// the solve. Sized for the trust-region subproblems here (tens to a few
// hundred rows), not for general-purpose LP work.
LpResult simplex_maximize(const VectorXd& c, const MatrixXd& A,
                          const VectorXd& b, long pivot_cap = 50000);

}  // namespace foldfinder
