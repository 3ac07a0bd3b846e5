#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "foldfinder/system.hpp"

namespace foldfinder {

// |h_i(x)| <= kWeightTol means "h_i(x) = 0": the ratio is undefined and is
// excluded from the min.
inline constexpr double kWeightTol = 1e-12;

// Index i is active when r_i(x) - lambda(x) <= kActiveTol*(1 + |lambda(x)|).
inline constexpr double kActiveTol = 1e-8;

// Pointwise data of the bifurcation functional lambda(x) = min_i g_i/h_i over
// components with h_i(x) != 0. Undefined ratios are explicit (nullopt), never
// NaN.
struct RatioProfile {
  VectorXd x;
  std::vector<std::optional<double>> ratios;
  double lambda_of_x = 0.0;
  std::vector<int> active;  // N(x), ascending
  bool full_active = false;

  int defined_count() const;
  bool defined(int i) const { return ratios[static_cast<std::size_t>(i)].has_value(); }
};

// Generalized gradient data at x: one gradient per active index,
//   grad r_i = (1/h_i) * (grad g_i - r_i * grad h_i).
struct Subdifferential {
  std::vector<int> indices;        // matches profile.active
  std::vector<VectorXd> gradients;
  int hull_dimension = 0;          // affine dimension of the gradient set
};

// Evaluates all ratios at x. Throws DomainViolation outside Q and
// DegenerateWeight when every component of h vanishes.
RatioProfile ratio_profile(const ParametricSystem& system, const VectorXd& x,
                           double active_tol = kActiveTol);

// Gradients of the active ratios. Throws EmptyActiveSet / DegenerateWeight.
Subdifferential subdifferential(const ParametricSystem& system,
                                const RatioProfile& profile);

// Gradient of a single ratio r_i at x (i must have |h_i(x)| > kWeightTol).
VectorXd ratio_gradient(const ParametricSystem& system, const VectorXd& x,
                        int i);

// Gradients of every defined ratio, with softmin weights computed by the
// smoothed solver. Rows of the returned matrix are grad r_i; undefined rows
// are flagged in `defined`.
struct RatioGradients {
  RatioProfile profile;
  MatrixXd grad;               // n x n, row i = grad r_i (0 when undefined)
  std::vector<bool> defined;
};

RatioGradients ratio_gradients(const ParametricSystem& system,
                               const VectorXd& x,
                               double active_tol = kActiveTol);

}  // namespace foldfinder
