#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "foldfinder/domain.hpp"

namespace foldfinder {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using VectorFn = std::function<VectorXd(const VectorXd&)>;
using JacobianFn = std::function<MatrixXd(const VectorXd&)>;

// The parametric family f(x, lambda) = g(x) - lambda*h(x) on the open box Q.
// g must be C^1 on Q; h must be componentwise nonnegative with at least one
// strictly positive component everywhere on Q. Evaluators are stateless, so
// concurrent evaluation at distinct points is safe.
struct ParametricSystem {
  int n = 0;
  VectorFn g;
  VectorFn h;
  // Analytic Jacobians when the builder has them; otherwise central finite
  // differences with step fd_step*(1+|x_i|) per coordinate.
  JacobianFn jac_g;
  JacobianFn jac_h;
  DomainSpec domain;

  // Finite sub-box of Q used to sample multistart points; mandatory when the
  // domain has infinite bounds.
  std::optional<std::pair<VectorXd, VectorXd>> sampling_box;
  // Branch-tracing seed shipped with built-in problems.
  std::optional<VectorXd> seed_point;

  // True when the builder can argue sign constancy + irreducibility of
  // J_x f(x, lambda) for all (x, lambda), not just at sampled points. Custom
  // (expression-defined) problems never set this.
  bool structural_r = false;
  std::string structural_r_note;

  std::string name = "custom";

  VectorXd eval_g(const VectorXd& x) const { return g(x); }
  VectorXd eval_h(const VectorXd& x) const { return h(x); }
  VectorXd eval_f(const VectorXd& x, double lambda) const {
    return g(x) - lambda * h(x);
  }

  MatrixXd eval_jac_g(const VectorXd& x) const;
  MatrixXd eval_jac_h(const VectorXd& x) const;
  // J_x f(x, lambda) = J_g(x) - lambda*J_h(x).
  MatrixXd eval_jac_f(const VectorXd& x, double lambda) const;

  void require_in_domain(const VectorXd& x) const;  // throws DomainViolation

  std::pair<VectorXd, VectorXd> sampling_bounds() const;  // throws if absent

  void validate() const;
};

inline constexpr double kFdStep = 1e-6;

// Central finite-difference Jacobian with per-coordinate step
// kFdStep*(1+|x_i|); second-order accurate for C^2 maps.
MatrixXd fd_jacobian(const VectorFn& fn, const VectorXd& x);

}  // namespace foldfinder
