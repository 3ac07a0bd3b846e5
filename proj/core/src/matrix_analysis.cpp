#include "foldfinder/matrix_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "foldfinder/errors.hpp"

namespace foldfinder {
namespace {

// Flips sign so the first numerically nonzero entry is positive.
void sign_normalize(VectorXd& v) {
  const double tiny = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tiny) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

// Strongly connected component count (Kosaraju) of the off-diagonal sparsity
// digraph.
int scc_count(const MatrixXd& A, double zero_tol) {
  const int n = static_cast<int>(A.rows());
  std::vector<std::vector<int>> fwd(n), rev(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(A(i, j)) > zero_tol) {
        fwd[i].push_back(j);
        rev[j].push_back(i);
      }

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    // Iterative DFS recording exit order.
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < fwd[v].size()) {
        int w = fwd[v][next++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  std::fill(seen.begin(), seen.end(), 0);
  int count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (seen[*it]) continue;
    ++count;
    std::vector<int> stack{*it};
    seen[*it] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : rev[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return count;
}

}  // namespace

RCheckReport check_off_diagonal_sign(const MatrixXd& A, double zero_tol) {
  RCheckReport rep;
  const int n = static_cast<int>(A.rows());
  int positive = 0, negative = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (A(i, j) > zero_tol) ++positive;
      else if (A(i, j) < -zero_tol) ++negative;
    }
  rep.sign_constant = positive == 0 || negative == 0;
  if (positive > 0 && negative == 0) rep.sign = OffDiagSign::kNonnegative;
  else if (negative > 0 && positive == 0) rep.sign = OffDiagSign::kNonpositive;
  else rep.sign = OffDiagSign::kBothPossibleZero;
  if (!rep.sign_constant) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && std::abs(A(i, j)) > zero_tol)
          rep.violating_entries.emplace_back(i, j, A(i, j));
  }
  return rep;
}

RCheckReport check_irreducible(const MatrixXd& A, double zero_tol) {
  RCheckReport rep;
  const int n = static_cast<int>(A.rows());
  if (n <= 1) {
    // 1x1 matrices are irreducible by convention (Perron theory degenerates
    // gracefully; the trivial digraph is strongly connected).
    rep.irreducible = true;
    rep.scc_count = n;
    return rep;
  }
  rep.scc_count = scc_count(A, zero_tol);
  rep.irreducible = rep.scc_count == 1;
  return rep;
}

RCheckReport check_condition_r_matrix(const MatrixXd& A, double zero_tol) {
  RCheckReport sign = check_off_diagonal_sign(A, zero_tol);
  RCheckReport irr = check_irreducible(A, zero_tol);
  sign.irreducible = irr.irreducible;
  sign.scc_count = irr.scc_count;
  return sign;
}

RConditionReport check_condition_r(
    const ParametricSystem& system,
    const std::vector<std::pair<VectorXd, double>>& points, double zero_tol) {
  RConditionReport agg;
  agg.structural = system.structural_r;
  agg.note = system.structural_r ? system.structural_r_note
                                 : "sampled evidence only: the check cannot "
                                   "cover all of Q x R";
  agg.pass = true;
  bool have_sign = false;
  bool sign_uniform = true;
  for (const auto& [x, lambda] : points) {
    system.require_in_domain(x);
    const MatrixXd J = system.eval_jac_f(x, lambda);
    RCheckReport rep = check_condition_r_matrix(J, zero_tol);
    ++agg.samples_checked;
    // The condition is pointwise: each sampled Jacobian must have
    // sign-constant off-diagonals and be irreducible. The strict sign is
    // allowed to differ between samples (a system can be cooperative in one
    // region and competitive in another); that is recorded, not failed.
    if (rep.sign_constant && rep.sign != OffDiagSign::kBothPossibleZero) {
      if (have_sign && rep.sign != agg.sign) sign_uniform = false;
      agg.sign = rep.sign;
      have_sign = true;
    }
    if (!rep.passes()) {
      agg.pass = false;
      agg.witness_x = x;
      agg.witness_lambda = lambda;
      agg.witness_report = rep;
      if (!rep.sign_constant)
        agg.note = "off-diagonal sign constancy fails at the witness sample";
      else if (rep.sign == OffDiagSign::kBothPossibleZero)
        agg.note =
            "all off-diagonal entries vanish at the witness sample "
            "(degenerate point); irreducibility fails there";
      else
        agg.note = "irreducibility fails at the witness sample";
      return agg;
    }
  }
  if (!sign_uniform)
    agg.note += "; the strict off-diagonal sign differs between samples";
  return agg;
}

namespace {

struct PowerResult {
  double perron_root = 0.0;  // of the shifted nonnegative matrix B
  VectorXd vec;
  long iterations = 0;
  std::vector<std::pair<double, double>> cw_bounds;
};

// Power iteration on a (numerically) nonnegative matrix B from a positive
// start. Convergence is measured by the Collatz-Wielandt quotient spread;
// the absolute 1e-12 target is padded with a rounding floor proportional to
// ||B|| so large, badly scaled matrices terminate at their attainable
// accuracy.
PowerResult power_iterate(const MatrixXd& B, std::vector<std::pair<double, double>>* trace) {
  const Eigen::Index n = B.rows();
  const double eps = std::numeric_limits<double>::epsilon();
  const double spread_tol =
      std::max(1e-12, 8.0 * eps * B.cwiseAbs().rowwise().sum().maxCoeff());

  PowerResult res;
  VectorXd v = VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (long it = 0; it < kPowerIterCap; ++it) {
    VectorXd w = B * v;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v[i] <= 0) continue;  // reducible matrices may zero out components
      double q = w[i] / v[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    if (!std::isfinite(lo)) throw NoConvergence("power iteration lost positivity");
    if (trace) trace->emplace_back(lo, hi);
    res.iterations = it + 1;
    if (hi - lo <= spread_tol) {
      res.perron_root = 0.5 * (lo + hi);
      res.vec = v;
      return res;
    }
    double norm = w.norm();
    if (norm == 0.0) {  // B annihilates v (e.g. the zero matrix)
      res.perron_root = 0.0;
      res.vec = v;
      return res;
    }
    v = w / norm;
  }
  throw NoConvergence("power iteration did not reach the quotient-spread "
                      "tolerance within the iteration cap");
}

}  // namespace

PerronCertificate perron_pair(const MatrixXd& A, PerronMode mode,
                              double scale_hint) {
  const Eigen::Index n = A.rows();
  PerronCertificate cert;

  // SVD-based kernel evidence is cheap at these sizes and useful in both
  // modes. The rank cutoff is relative to max(sigma_max, scale_hint): a fold
  // Jacobian can be small in every entry (n = 1 especially), in which case
  // the caller's problem scale, not |A|, decides what counts as zero.
  Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv[0] : 0.0;
  const double rank_tol = static_cast<double>(n) * kRankTolFactor *
                          std::max(sigma_max, scale_hint);
  int kdim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] <= rank_tol) ++kdim;
  cert.kernel_dim_estimate = sigma_max == 0.0 ? static_cast<int>(n) : kdim;

  if (mode == PerronMode::kKernel) {
    cert.right_vec = svd.matrixV().col(n - 1);
    cert.left_vec = svd.matrixU().col(n - 1);
    sign_normalize(cert.right_vec);
    sign_normalize(cert.left_vec);
    cert.min_component =
        std::min(cert.right_vec.minCoeff(), cert.left_vec.minCoeff());
    // Field contract: the real eigenvalue of smallest modulus. At the fold
    // matrices this mode exists for, that is the (near-)zero eigenvalue.
    Eigen::EigenSolver<MatrixXd> eig(A);
    const double imag_tol = 1e-8 * (1.0 + sigma_max);
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ev = eig.eigenvalues()[i];
      if (std::abs(ev.imag()) > imag_tol) continue;
      if (std::abs(ev.real()) < std::abs(best) || !found) {
        best = ev.real();
        found = true;
      }
    }
    cert.eigenvalue = found ? best : sv[n - 1];
    return cert;
  }

  RCheckReport sign = check_off_diagonal_sign(A);
  if (!sign.sign_constant)
    throw NotSignConstant(
        "dominant-structure mode requires an off-diagonal sign-constant "
        "matrix");
  const bool flip = sign.sign == OffDiagSign::kNonpositive;
  const double sigma = A.cwiseAbs().rowwise().sum().maxCoeff();
  const MatrixXd B = flip ? MatrixXd(-A + sigma * MatrixXd::Identity(n, n))
                          : MatrixXd(A + sigma * MatrixXd::Identity(n, n));

  PowerResult right = power_iterate(B, &cert.cw_bounds);
  PowerResult left = power_iterate(B.transpose(), nullptr);
  cert.iterations = right.iterations + left.iterations;
  cert.eigenvalue =
      flip ? sigma - right.perron_root : right.perron_root - sigma;
  cert.right_vec = right.vec.normalized();
  cert.left_vec = left.vec.normalized();
  sign_normalize(cert.right_vec);
  sign_normalize(cert.left_vec);
  cert.min_component =
      std::min(cert.right_vec.minCoeff(), cert.left_vec.minCoeff());
  return cert;
}

}  // namespace foldfinder
