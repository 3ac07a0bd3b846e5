#include "foldfinder/continuation.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <optional>
#include <sstream>

#include "foldfinder/errors.hpp"
#include "foldfinder/newton.hpp"

namespace foldfinder {
namespace {

using Vector = VectorXd;

// Unit kernel vector of the n x (n+1) bordered system [J | -h]: the branch
// tangent (dx, dlambda) solving J dx - h dlambda = 0.
VectorXd analytic_tangent(const ParametricSystem& system, const VectorXd& x,
                          double lambda) {
  const int n = system.n;
  MatrixXd M(n, n + 1);
  M.leftCols(n) = system.eval_jac_f(x, lambda);
  M.col(n) = -system.eval_h(x);
  Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
  return svd.matrixV().col(n);
}

void orient(VectorXd& t, const VectorXd& reference) {
  if (t.dot(reference) < 0) t = -t;
}

// Newton corrector on [f(x, lambda); t.(y - y_pred)] = 0: the standard
// pseudo-arclength constraint plane through the predictor.
std::optional<VectorXd> correct(const ParametricSystem& system,
                                const VectorXd& y_pred, const VectorXd& t,
                                double tol, int max_newton) {
  const int n = system.n;
  VectorXd y = y_pred;
  for (int it = 0; it < max_newton; ++it) {
    const VectorXd x = y.head(n);
    const double lambda = y[n];
    VectorXd f = system.eval_f(x, lambda);
    if (!f.allFinite()) return std::nullopt;
    const double c = t.dot(y - y_pred);
    if (f.lpNorm<Eigen::Infinity>() <= tol &&
        std::abs(c) <= 1e-12 * (1.0 + y.norm()))
      return y;

    MatrixXd M(n + 1, n + 1);
    M.topLeftCorner(n, n) = system.eval_jac_f(x, lambda);
    M.topRightCorner(n, 1) = -system.eval_h(x);
    M.row(n) = t.transpose();
    VectorXd rhs(n + 1);
    rhs.head(n) = -f;
    rhs[n] = -c;
    VectorXd delta = M.partialPivLu().solve(rhs);
    if (!delta.allFinite()) return std::nullopt;
    y += delta;
  }
  return std::nullopt;
}

}  // namespace

void Branch::detect_folds() {
  fold_indices.clear();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i].tangent[points[i].tangent.size() - 1];
    const double b = points[i + 1].tangent[points[i + 1].tangent.size() - 1];
    if (a * b < 0) fold_indices.push_back(static_cast<int>(i));
  }
}

std::pair<VectorXd, double> branch_start(const ParametricSystem& system,
                                         const VectorXd& x_seed,
                                         double lambda0, double tol) {
  auto F = [&](const VectorXd& x) { return system.eval_f(x, lambda0); };
  auto J = [&](const VectorXd& x) { return system.eval_jac_f(x, lambda0); };
  NewtonOptions options;
  options.tol_inf = tol;
  NewtonResult res = damped_newton(F, J, x_seed, options);
  if (!res.converged || !system.domain.contains(res.x))
    throw StartInfeasible(
        "no branch point reachable from the seed at the requested lambda");
  return {res.x, lambda0};
}

Branch trace_branch(const ParametricSystem& system, const VectorXd& x0,
                    double lambda0, const TraceConfig& config) {
  const int n = system.n;
  {
    const double r0 =
        system.eval_f(x0, lambda0).lpNorm<Eigen::Infinity>();
    if (!(r0 <= 1e3 * config.corrector_tol))
      throw StartInfeasible(
          "start residual exceeds 1e3 * corrector_tol; polish the seed with "
          "branch_start first");
  }

  VectorXd y0(n + 1);
  y0.head(n) = x0;
  y0[n] = lambda0;

  // Polish the start. A plain fixed-lambda Newton handles regular points;
  // if the Jacobian is singular there (the start is already a fold), correct
  // orthogonally to the kernel tangent instead.
  {
    auto F = [&](const VectorXd& x) { return system.eval_f(x, lambda0); };
    auto J = [&](const VectorXd& x) { return system.eval_jac_f(x, lambda0); };
    NewtonOptions options;
    options.tol_inf = config.corrector_tol;
    options.max_iters = 50;
    NewtonResult polish = damped_newton(F, J, x0, options);
    if (polish.converged) {
      y0.head(n) = polish.x;
    } else {
      VectorXd t = analytic_tangent(system, x0, lambda0);
      auto corrected =
          correct(system, y0, t, config.corrector_tol, config.max_newton);
      if (!corrected)
        throw StartInfeasible("cannot polish the start onto the branch");
      y0 = *corrected;
    }
  }
  if (!system.domain.contains(y0.head(n)))
    throw StartInfeasible("polished start lies outside the domain");

  Branch branch;
  VectorXd t0 = analytic_tangent(system, y0.head(n), y0[n]);
  if (std::abs(t0[n]) > 1e-10) {
    if (t0[n] * config.direction < 0) t0 = -t0;
  }
  branch.points.push_back({y0.head(n), y0[n], 0.0, t0});

  double s = config.step;
  branch.stop_reason = Branch::StopReason::kMaxPoints;
  while (static_cast<int>(branch.points.size()) < config.max_points) {
    const BranchPoint& cur = branch.points.back();
    VectorXd y_cur(n + 1);
    y_cur.head(n) = cur.x;
    y_cur[n] = cur.lambda;

    // Analytic tangent for the first step, secant afterwards.
    VectorXd dir;
    if (branch.points.size() == 1) {
      dir = cur.tangent;
    } else {
      const BranchPoint& prev = branch.points[branch.points.size() - 2];
      dir = VectorXd(n + 1);
      dir.head(n) = cur.x - prev.x;
      dir[n] = cur.lambda - prev.lambda;
      dir.normalize();
    }

    bool accepted = false;
    int halvings = 0;
    double s_try = s;
    while (halvings <= 8 && s_try >= 0.12 * config.step) {
      VectorXd y_pred = y_cur + s_try * dir;
      auto y_new =
          correct(system, y_pred, dir, config.corrector_tol, config.max_newton);
      if (y_new) {
        const double dist = (*y_new - y_cur).norm();
        // Keep point spacing commensurate with the attempted step so the
        // stored branch is honestly parameterized.
        if (dist >= 0.1 * s_try && dist <= 10.0 * s_try &&
            dist >= 0.1 * config.step && dist <= 10.0 * config.step) {
          if (!system.domain.contains(y_new->head(n))) {
            branch.stop_reason = Branch::StopReason::kDomainExit;
            branch.detect_folds();
            return branch;
          }
          VectorXd t_new = analytic_tangent(system, y_new->head(n), (*y_new)[n]);
          orient(t_new, dir);
          branch.points.push_back(
              {y_new->head(n), (*y_new)[n], cur.s + dist, t_new});
          accepted = true;
          if (halvings == 0) s = std::min(s * 1.4, 4.0 * config.step);
          else s = s_try;
          break;
        }
      }
      s_try *= 0.5;
      ++halvings;
    }
    if (!accepted) {
      branch.stop_reason = Branch::StopReason::kCorrectorDivergence;
      break;
    }
  }
  branch.detect_folds();
  return branch;
}

std::vector<std::pair<VectorXd, double>> fold_from_branch(
    const ParametricSystem& system, const Branch& branch, double slope_tol) {
  if (branch.points.size() < 3)
    throw Error("fold refinement needs a branch with at least 3 points");
  const int n = system.n;
  std::vector<std::pair<VectorXd, double>> folds;

  for (int idx : branch.fold_indices) {
    const BranchPoint& a = branch.points[static_cast<std::size_t>(idx)];
    const BranchPoint& b = branch.points[static_cast<std::size_t>(idx) + 1];
    VectorXd ya(n + 1), yb(n + 1);
    ya.head(n) = a.x;
    ya[n] = a.lambda;
    yb.head(n) = b.x;
    yb[n] = b.lambda;
    VectorXd chord = yb - ya;
    VectorXd dir = chord.normalized();

    double slope_a = a.tangent[n];
    double lo = 0.0, hi = 1.0;
    VectorXd y_best = ya;
    double slope_best = slope_a;
    for (int it = 0; it < 80 && std::abs(slope_best) > slope_tol; ++it) {
      double mid = 0.5 * (lo + hi);
      auto y_mid = correct(system, ya + mid * chord, dir, 1e-12, 30);
      if (!y_mid) break;  // fall back to the best point so far
      VectorXd t_mid = analytic_tangent(system, y_mid->head(n), (*y_mid)[n]);
      orient(t_mid, dir);
      double slope_mid = t_mid[n];
      if (std::abs(slope_mid) < std::abs(slope_best)) {
        slope_best = slope_mid;
        y_best = *y_mid;
      }
      if (slope_mid * slope_a > 0) lo = mid;
      else hi = mid;
    }
    folds.emplace_back(y_best.head(n), y_best[n]);
  }
  return folds;
}

std::string branch_to_csv(const Branch& branch) {
  std::ostringstream os;
  os.precision(17);
  const Eigen::Index n =
      branch.points.empty() ? 0 : branch.points.front().x.size();
  os << "s,lambda";
  for (Eigen::Index j = 0; j < n; ++j) os << ",x_" << (j + 1);
  os << ",tangent_lambda\n";
  for (const auto& p : branch.points) {
    os << p.s << ',' << p.lambda;
    for (Eigen::Index j = 0; j < n; ++j) os << ',' << p.x[j];
    os << ',' << p.tangent[p.tangent.size() - 1] << '\n';
  }
  return os.str();
}

}  // namespace foldfinder
