#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "foldfinder/system.hpp"

namespace foldfinder {

inline constexpr double kZeroTol = 1e-10;       // off-diagonal "is zero" cutoff
inline constexpr double kRankTolFactor = 1e-10; // numerical-rank cutoff, times n
inline constexpr long kPowerIterCap = 100000;

enum class OffDiagSign { kNonnegative, kNonpositive, kBothPossibleZero };

// Point evidence for condition (R): off-diagonal sign constancy plus
// irreducibility of a square matrix.
struct RCheckReport {
  bool sign_constant = false;
  OffDiagSign sign = OffDiagSign::kBothPossibleZero;
  // Off-diagonal entries breaking sign constancy, as (i, j, value).
  std::vector<std::tuple<int, int, double>> violating_entries;

  bool irreducible = false;
  int scc_count = 0;

  bool passes() const { return sign_constant && irreducible; }
};

// Aggregated (R) evidence over a sample of (x, lambda) pairs.
struct RConditionReport {
  bool pass = false;
  OffDiagSign sign = OffDiagSign::kBothPossibleZero;
  // Set when pass = false: first sample where the check broke.
  VectorXd witness_x;
  double witness_lambda = 0.0;
  RCheckReport witness_report;
  // True when the problem builder guarantees (R) structurally for all
  // (x, lambda); sampling alone can never establish that.
  bool structural = false;
  std::string note;
  int samples_checked = 0;
};

// Eigen-structure evidence for a square matrix. Two flavours:
//   - dominant-structure: Perron pair of the (shifted) nonnegative matrix,
//     found by power iteration on B = +/-A + sigma*I;
//   - kernel: SVD-based kernel dimension and the singular pair of the
//     smallest singular value (the fold certificate's null vectors).
struct PerronCertificate {
  double eigenvalue = 0.0;
  VectorXd right_vec;  // unit length, positive first nonzero entry
  VectorXd left_vec;
  int kernel_dim_estimate = 0;
  double min_component = 0.0;
  // Collatz-Wielandt quotient interval per power-iteration step (dominant
  // mode only): min_i (Bv)_i/v_i <= perron_root(B) <= max_i (Bv)_i/v_i.
  std::vector<std::pair<double, double>> cw_bounds;
  long iterations = 0;
};

enum class PerronMode { kDominantStructure, kKernel };

RCheckReport check_off_diagonal_sign(const MatrixXd& A,
                                     double zero_tol = kZeroTol);

// Irreducibility via strong connectivity of the off-diagonal sparsity
// digraph (edge i->j iff i != j and |a_ij| > zero_tol). 1x1 matrices are
// irreducible by convention.
RCheckReport check_irreducible(const MatrixXd& A, double zero_tol = kZeroTol);

// Both checks on one matrix.
RCheckReport check_condition_r_matrix(const MatrixXd& A,
                                      double zero_tol = kZeroTol);

// Evaluates J_x f(x, lambda) at each sample and aggregates; inherits the
// builder's structural flag. Throws DomainViolation for samples outside Q.
RConditionReport check_condition_r(
    const ParametricSystem& system,
    const std::vector<std::pair<VectorXd, double>>& points,
    double zero_tol = kZeroTol);

// mode = kDominantStructure requires a sign-constant matrix (throws
// NotSignConstant otherwise, NoConvergence past the iteration cap).
// scale_hint widens the kernel rank cutoff to n*kRankTolFactor*
// max(sigma_max(A), scale_hint); pass the norm of the operator A was built
// from when A itself may be near zero (1x1 fold Jacobians).
PerronCertificate perron_pair(const MatrixXd& A, PerronMode mode,
                              double scale_hint = 0.0);

}  // namespace foldfinder
