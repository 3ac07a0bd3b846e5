#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "foldfinder/system.hpp"

namespace foldfinder {

struct BranchPoint {
  VectorXd x;
  double lambda = 0.0;
  double s = 0.0;       // accumulated arclength
  VectorXd tangent;     // unit (n+1)-vector (dx, dlambda), analytic
};

struct TraceConfig {
  double step = 0.01;           // target arclength step
  double corrector_tol = 1e-10; // |f|_inf at accepted points
  int max_points = 2000;
  int direction = +1;           // sign of the initial tangent's lambda slope
  int max_newton = 12;
};

struct Branch {
  enum class StopReason { kMaxPoints, kDomainExit, kCorrectorDivergence };

  std::vector<BranchPoint> points;
  // Index i for each sign change of tangent lambda between points i and i+1.
  std::vector<int> fold_indices;
  StopReason stop_reason = StopReason::kMaxPoints;

  void detect_folds();  // fills fold_indices from the stored tangents
};

// Newton-polishes (x_seed, lambda0) at fixed lambda into a branch point.
// Throws StartInfeasible when no root is reachable from the seed.
std::pair<VectorXd, double> branch_start(const ParametricSystem& system,
                                         const VectorXd& x_seed,
                                         double lambda0,
                                         double tol = 1e-10);

// Pseudo-arclength predictor-corrector from a point with |f|_inf <=
// 1e3*corrector_tol (polished first). Analytic tangent predicts the first
// step, secants predict later ones; the corrector is Newton orthogonal to
// the predictor direction with step halving (8 tries) on failure. A start
// with singular Jacobian (already a fold) is nudged along the kernel.
// Throws StartInfeasible; corrector exhaustion is recorded as the stop
// reason since the branch up to that point remains valid data.
Branch trace_branch(const ParametricSystem& system, const VectorXd& x0,
                    double lambda0, const TraceConfig& config = {});

// Bisection on the tangent lambda slope around each detected sign change,
// refined to |dlambda/ds| <= 1e-8. Requires >= 3 branch points.
std::vector<std::pair<VectorXd, double>> fold_from_branch(
    const ParametricSystem& system, const Branch& branch,
    double slope_tol = 1e-8);

// CSV with columns s,lambda,x_1..x_n,tangent_lambda, one row per point.
std::string branch_to_csv(const Branch& branch);

}  // namespace foldfinder
