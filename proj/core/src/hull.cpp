#include "foldfinder/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "foldfinder/errors.hpp"

namespace foldfinder {
namespace {

double objective(const MatrixXd& G, const VectorXd& zeta, VectorXd* point) {
  VectorXd p = G * zeta;
  if (point) *point = p;
  return p.squaredNorm();
}

// Minimizer of |G z|^2 over the affine slice {sum z = 1}, signs free, via a
// least-squares parametrization (no normal equations). Its value bounds the
// hull minimum from below, so a solution that already lies in the simplex is
// the exact answer.
VectorXd affine_slice_minimizer(const MatrixXd& G) {
  const Eigen::Index m = G.cols();
  VectorXd z0 = VectorXd::Constant(m, 1.0 / m);
  if (m == 1) return z0;
  MatrixXd N = MatrixXd::Zero(m, m - 1);  // basis of the sum-zero subspace
  N.topLeftCorner(m - 1, m - 1).setIdentity();
  N.row(m - 1).setConstant(-1.0);
  MatrixXd GN = G * N;
  VectorXd y = GN.completeOrthogonalDecomposition().solve(-(G * z0));
  return z0 + N * y;
}

// Primal active-set pass: solve the affine slice exactly, drop the most
// negative weight, repeat on the shrunken support. Lands on the optimal face
// directly whenever zero sits inside (or near) the hull, which is exactly
// where the iterative method below crawls.
VectorXd active_set_candidate(const MatrixXd& G, bool* first_round_clean) {
  const Eigen::Index m = G.cols();
  std::vector<Eigen::Index> support(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) support[static_cast<std::size_t>(j)] = j;

  while (true) {
    MatrixXd Gs(G.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j)
      Gs.col(static_cast<Eigen::Index>(j)) = G.col(support[j]);
    VectorXd z = affine_slice_minimizer(Gs);
    Eigen::Index worst = 0;
    if (z.minCoeff(&worst) >= -1e-12 || support.size() == 1) {
      *first_round_clean = support.size() == static_cast<std::size_t>(m);
      z = z.cwiseMax(0.0);
      z /= z.sum();
      VectorXd full = VectorXd::Zero(m);
      for (std::size_t j = 0; j < support.size(); ++j)
        full[support[j]] = z[static_cast<Eigen::Index>(j)];
      return full;
    }
    support.erase(support.begin() + worst);
  }
}

// Exact minimizer of |G zeta|^2 on the affine slice {sum zeta_S = 1} of the
// current support; returns false when it leaves the simplex.
bool support_polish(const MatrixXd& G, VectorXd& zeta) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < zeta.size(); ++j)
    if (zeta[j] > 1e-12) support.push_back(j);
  if (support.empty()) return false;
  const Eigen::Index k = static_cast<Eigen::Index>(support.size());

  MatrixXd Gs(G.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) Gs.col(j) = G.col(support[j]);

  // KKT system of min z'Q z s.t. 1'z = 1, Q = Gs'Gs.
  MatrixXd K = MatrixXd::Zero(k + 1, k + 1);
  K.topLeftCorner(k, k) = 2.0 * (Gs.transpose() * Gs);
  K.topRightCorner(k, 1).setOnes();
  K.bottomLeftCorner(1, k).setOnes();
  VectorXd rhs = VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  VectorXd sol = K.completeOrthogonalDecomposition().solve(rhs);

  VectorXd z = sol.head(k);
  double min_z = z.minCoeff();
  if (min_z < -1e-10) return false;
  z = z.cwiseMax(0.0);
  double total = z.sum();
  if (total <= 0) return false;
  z /= total;

  VectorXd candidate = VectorXd::Zero(zeta.size());
  for (Eigen::Index j = 0; j < k; ++j) candidate[support[j]] = z[j];
  if (objective(G, candidate, nullptr) <= objective(G, zeta, nullptr)) {
    zeta = candidate;
    return true;
  }
  return false;
}

}  // namespace

MinNormResult min_norm_in_hull(const MatrixXd& G, long iter_cap) {
  const Eigen::Index m = G.cols();
  if (m == 0) throw Error("min_norm_in_hull: empty point set");

  MinNormResult res;
  const double scale2 = std::max(1.0, G.cwiseAbs().maxCoeff());
  const double gap_tol = 1e-18 * scale2 * scale2;

  // Exact slice solve first. When the sign-free minimizer lies in the
  // simplex it is the hull minimizer and the iterative phase is skipped;
  // otherwise the active-set candidate competes with the iterative result.
  bool slice_clean = false;
  VectorXd zeta_as = active_set_candidate(G, &slice_clean);
  if (slice_clean) {
    res.zeta = zeta_as;
    res.point = G * zeta_as;
    res.norm = res.point.norm();
    res.iterations = 0;
    VectorXd grad = 2.0 * (G.transpose() * res.point);
    Eigen::Index toward = 0;
    grad.minCoeff(&toward);
    res.fw_gap = grad.dot(zeta_as) - grad[toward];
    return res;
  }

  // Start at the shortest column.
  Eigen::Index start = 0;
  double best = G.col(0).squaredNorm();
  for (Eigen::Index j = 1; j < m; ++j) {
    double s = G.col(j).squaredNorm();
    if (s < best) {
      best = s;
      start = j;
    }
  }
  VectorXd zeta = VectorXd::Zero(m);
  zeta[start] = 1.0;

  VectorXd p = G * zeta;
  for (long it = 0; it < iter_cap; ++it) {
    res.iterations = it + 1;
    VectorXd grad = 2.0 * (G.transpose() * p);  // gradient of |G zeta|^2

    Eigen::Index toward = 0;
    grad.minCoeff(&toward);
    Eigen::Index away = -1;
    double away_val = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m; ++j)
      if (zeta[j] > 1e-14 && grad[j] > away_val) {
        away_val = grad[j];
        away = j;
      }

    const double gz = grad.dot(zeta);
    res.fw_gap = gz - grad[toward];
    if (res.fw_gap <= gap_tol) break;

    // Pick the steeper of the toward/away directions.
    const double fw_desc = gz - grad[toward];
    const double away_desc = away >= 0 ? grad[away] - gz : 0.0;
    VectorXd dir;       // direction in zeta space
    double gamma_max = 1.0;
    if (away >= 0 && away_desc > fw_desc) {
      dir = zeta;       // away step: move mass off `away` onto the rest
      dir[away] -= 1.0;
      double za = zeta[away];
      gamma_max = za < 1.0 ? za / (1.0 - za) : 1e12;
    } else {
      dir = -zeta;
      dir[toward] += 1.0;
      gamma_max = 1.0;
    }

    VectorXd Gd = G * dir;
    double denom = Gd.squaredNorm();
    double slope = p.dot(Gd);  // (1/2) d/dgamma at 0
    if (denom <= 0) break;
    double gamma = std::clamp(-slope / denom, 0.0, gamma_max);
    if (gamma <= 0) break;

    zeta += gamma * dir;
    zeta = zeta.cwiseMax(0.0);
    double total = zeta.sum();
    if (total > 0) zeta /= total;
    p = G * zeta;
  }

  support_polish(G, zeta);
  if (objective(G, zeta_as, nullptr) < objective(G, zeta, nullptr))
    zeta = zeta_as;
  res.zeta = zeta;
  res.point = G * zeta;
  res.norm = res.point.norm();
  {
    VectorXd grad = 2.0 * (G.transpose() * res.point);
    Eigen::Index toward = 0;
    grad.minCoeff(&toward);
    res.fw_gap = grad.dot(zeta) - grad[toward];
  }
  return res;
}

MinNormResult min_norm_in_hull(const std::vector<VectorXd>& points,
                               long iter_cap) {
  if (points.empty()) throw Error("min_norm_in_hull: empty point set");
  MatrixXd G(points[0].size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j)
    G.col(static_cast<Eigen::Index>(j)) = points[j];
  return min_norm_in_hull(G, iter_cap);
}

}  // namespace foldfinder
