#include "foldfinder/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "foldfinder/errors.hpp"

namespace foldfinder {

int RatioProfile::defined_count() const {
  int k = 0;
  for (const auto& r : ratios) k += r.has_value() ? 1 : 0;
  return k;
}

RatioProfile ratio_profile(const ParametricSystem& system, const VectorXd& x,
                           double active_tol) {
  system.require_in_domain(x);
  const VectorXd gx = system.eval_g(x);
  const VectorXd hx = system.eval_h(x);

  RatioProfile p;
  p.x = x;
  p.ratios.resize(static_cast<std::size_t>(system.n));
  double lambda = std::numeric_limits<double>::infinity();
  int defined = 0;
  for (int i = 0; i < system.n; ++i) {
    if (std::abs(hx[i]) <= kWeightTol) continue;
    double r = gx[i] / hx[i];
    p.ratios[static_cast<std::size_t>(i)] = r;
    lambda = std::min(lambda, r);
    ++defined;
  }
  if (defined == 0)
    throw DegenerateWeight("all components of h vanish at the query point");
  p.lambda_of_x = lambda;
  const double tol = active_tol * (1.0 + std::abs(lambda));
  for (int i = 0; i < system.n; ++i) {
    const auto& r = p.ratios[static_cast<std::size_t>(i)];
    if (r && *r - lambda <= tol) p.active.push_back(i);
  }
  p.full_active = static_cast<int>(p.active.size()) == system.n;
  return p;
}

VectorXd ratio_gradient(const ParametricSystem& system, const VectorXd& x,
                        int i) {
  const VectorXd hx = system.eval_h(x);
  if (std::abs(hx[i]) <= kWeightTol)
    throw DegenerateWeight("ratio gradient requested where h_i vanishes");
  const double r = system.eval_g(x)[i] / hx[i];
  const VectorXd dg = system.eval_jac_g(x).row(i);
  const VectorXd dh = system.eval_jac_h(x).row(i);
  return (dg - r * dh) / hx[i];
}

Subdifferential subdifferential(const ParametricSystem& system,
                                const RatioProfile& profile) {
  if (profile.active.empty())
    throw EmptyActiveSet("no active ratio at the query point");
  const VectorXd hx = system.eval_h(profile.x);
  const MatrixXd Jg = system.eval_jac_g(profile.x);
  const MatrixXd Jh = system.eval_jac_h(profile.x);

  Subdifferential sd;
  sd.indices = profile.active;
  sd.gradients.reserve(profile.active.size());
  for (int i : profile.active) {
    if (std::abs(hx[i]) <= kWeightTol)
      throw DegenerateWeight("active ratio with vanishing weight");
    const double r = *profile.ratios[static_cast<std::size_t>(i)];
    VectorXd grad = (Jg.row(i).transpose() - r * Jh.row(i).transpose()) / hx[i];
    sd.gradients.push_back(std::move(grad));
  }

  // Affine dimension = rank of {g_i - g_0}.
  if (sd.gradients.size() > 1) {
    MatrixXd D(system.n, static_cast<Eigen::Index>(sd.gradients.size()) - 1);
    for (std::size_t k = 1; k < sd.gradients.size(); ++k)
      D.col(static_cast<Eigen::Index>(k - 1)) = sd.gradients[k] - sd.gradients[0];
    Eigen::ColPivHouseholderQR<MatrixXd> qr(D);
    qr.setThreshold(1e-10);
    sd.hull_dimension = static_cast<int>(qr.rank());
  }
  return sd;
}

RatioGradients ratio_gradients(const ParametricSystem& system,
                               const VectorXd& x, double active_tol) {
  RatioGradients rg;
  rg.profile = ratio_profile(system, x, active_tol);
  rg.grad = MatrixXd::Zero(system.n, system.n);
  rg.defined.assign(static_cast<std::size_t>(system.n), false);

  const VectorXd hx = system.eval_h(x);
  const MatrixXd Jg = system.eval_jac_g(x);
  const MatrixXd Jh = system.eval_jac_h(x);
  for (int i = 0; i < system.n; ++i) {
    if (!rg.profile.defined(i)) continue;
    const double r = *rg.profile.ratios[static_cast<std::size_t>(i)];
    rg.grad.row(i) = (Jg.row(i) - r * Jh.row(i)) / hx[i];
    rg.defined[static_cast<std::size_t>(i)] = true;
  }
  return rg;
}

}  // namespace foldfinder
