#include "foldfinder/newton.hpp"

#include <cmath>
#include <limits>

namespace foldfinder {
namespace {

bool finite(const VectorXd& v) { return v.allFinite(); }

}  // namespace

NewtonResult damped_newton(const std::function<VectorXd(const VectorXd&)>& F,
                           const std::function<MatrixXd(const VectorXd&)>& J,
                           const VectorXd& x0, const NewtonOptions& options) {
  NewtonResult res;
  res.x = x0;
  VectorXd fx = F(res.x);
  if (!finite(fx)) {
    res.residual_inf = res.initial_residual_inf =
        std::numeric_limits<double>::infinity();
    return res;
  }
  res.initial_residual_inf = fx.lpNorm<Eigen::Infinity>();
  double phi = fx.squaredNorm();

  for (int it = 0; it < options.max_iters; ++it) {
    res.iterations = it;
    res.residual_inf = fx.lpNorm<Eigen::Infinity>();
    if (res.residual_inf <= options.tol_inf) {
      res.converged = true;
      return res;
    }

    MatrixXd Jx = J(res.x);
    if (!Jx.allFinite()) return res;
    // ColPivHouseholderQR solves square systems and degrades to least squares
    // when the Jacobian is (near-)singular.
    VectorXd dir = Jx.colPivHouseholderQr().solve(-fx);
    if (!finite(dir)) return res;

    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= options.min_step) {
      VectorXd trial = res.x + alpha * dir;
      VectorXd ft = F(trial);
      if (finite(ft)) {
        double phit = ft.squaredNorm();
        if (phit <= (1.0 - 2.0 * options.armijo_c * alpha) * phi) {
          res.x = trial;
          fx = ft;
          phi = phit;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) return res;  // stalled; caller sees converged = false
  }
  res.residual_inf = fx.lpNorm<Eigen::Infinity>();
  res.converged = res.residual_inf <= options.tol_inf;
  return res;
}

}  // namespace foldfinder
