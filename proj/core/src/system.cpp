#include "foldfinder/system.hpp"

#include <cmath>

#include "foldfinder/errors.hpp"

namespace foldfinder {

MatrixXd fd_jacobian(const VectorFn& fn, const VectorXd& x) {
  const Eigen::Index n = x.size();
  VectorXd xp = x, xm = x;
  MatrixXd J;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double step = kFdStep * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + step;
    xm[j] = x[j] - step;
    VectorXd fp = fn(xp);
    VectorXd fm = fn(xm);
    if (J.size() == 0) J.resize(fp.size(), n);
    J.col(j) = (fp - fm) / (2.0 * step);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return J;
}

MatrixXd ParametricSystem::eval_jac_g(const VectorXd& x) const {
  return jac_g ? jac_g(x) : fd_jacobian(g, x);
}

MatrixXd ParametricSystem::eval_jac_h(const VectorXd& x) const {
  return jac_h ? jac_h(x) : fd_jacobian(h, x);
}

MatrixXd ParametricSystem::eval_jac_f(const VectorXd& x, double lambda) const {
  return eval_jac_g(x) - lambda * eval_jac_h(x);
}

void ParametricSystem::require_in_domain(const VectorXd& x) const {
  if (!domain.contains(x))
    throw DomainViolation("point lies outside the problem domain");
}

std::pair<VectorXd, VectorXd> ParametricSystem::sampling_bounds() const {
  if (sampling_box) return *sampling_box;
  // Fall back to the domain box itself when it is finite.
  for (Eigen::Index i = 0; i < domain.lower.size(); ++i)
    if (!std::isfinite(domain.lower[i]) || !std::isfinite(domain.upper[i]))
      throw Error(
          "sampling box required: the domain has infinite bounds and the "
          "problem supplies no finite sub-box");
  return {domain.lower, domain.upper};
}

void ParametricSystem::validate() const {
  if (n <= 0) throw Error("system: dimension must be positive");
  if (!g || !h) throw Error("system: g and h evaluators are required");
  domain.validate();
  if (domain.dimension() != n) throw Error("system: domain dimension mismatch");
  if (sampling_box) {
    if (sampling_box->first.size() != n || sampling_box->second.size() != n)
      throw Error("system: sampling box dimension mismatch");
    for (int i = 0; i < n; ++i) {
      if (!(sampling_box->first[i] < sampling_box->second[i]) ||
          !std::isfinite(sampling_box->first[i]) ||
          !std::isfinite(sampling_box->second[i]))
        throw Error("system: sampling box must be a finite nonempty box");
    }
  }
  if (seed_point && seed_point->size() != n)
    throw Error("system: seed point dimension mismatch");
}

}  // namespace foldfinder
