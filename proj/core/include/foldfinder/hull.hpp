#pragma once

#include <Eigen/Dense>
#include <vector>

namespace foldfinder {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Minimum-norm point of conv{columns of G}.
struct MinNormResult {
  VectorXd point;        // G * zeta
  VectorXd zeta;         // simplex weights, zeta >= 0, sum = 1
  double norm = 0.0;     // |point|
  double fw_gap = 0.0;   // final Frank-Wolfe duality gap of |G zeta|^2
  long iterations = 0;
};

// Exact affine-slice solve first: the minimizer of |G zeta|^2 over
// {sum zeta = 1} bounds the hull minimum from below, so when it (or an
// active-set shrink of it) lands inside the simplex it is the answer at
// machine precision — in particular whenever zero lies in the hull, where
// iterative schemes crawl. Otherwise Frank-Wolfe with away steps runs to
// iter_cap and the better of the two candidates is returned.
MinNormResult min_norm_in_hull(const MatrixXd& G, long iter_cap = 10000);

MinNormResult min_norm_in_hull(const std::vector<VectorXd>& points,
                               long iter_cap = 10000);

}  // namespace foldfinder
