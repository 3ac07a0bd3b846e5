#pragma once

#include <Eigen/Dense>
#include <functional>

namespace foldfinder {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct NewtonOptions {
  double tol_inf = 1e-10;  // stop when |F(x)|_inf <= tol_inf
  int max_iters = 200;
  double armijo_c = 1e-4;
  double min_step = 1e-12;
};

struct NewtonResult {
  VectorXd x;
  double residual_inf = 0.0;
  double initial_residual_inf = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on F(x) = 0 with Armijo backtracking on |F|^2. Trial points
// where F is not finite (outside the region where the problem evaluates) are
// rejected by the line search, which confines iterates to the closure of the
// evaluable set without explicit projection. Singular Jacobians fall back to
// a least-squares direction.
NewtonResult damped_newton(const std::function<VectorXd(const VectorXd&)>& F,
                           const std::function<MatrixXd(const VectorXd&)>& J,
                           const VectorXd& x0,
                           const NewtonOptions& options = {});

}  // namespace foldfinder
