#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "foldfinder/matrix_analysis.hpp"
#include "foldfinder/ratio.hpp"
#include "foldfinder/system.hpp"

namespace foldfinder {

inline constexpr double kTolStationarityDefault = 1e-7;
// Both kernel vectors must clear this after sign normalization for the
// strict-positivity clause.
inline constexpr double kPositivityTol = 1e-6;

// Minimum-norm element of conv{grad r_i : i in N(x)} plus the simplex
// weights attaining it and their mapped left-null candidate xi = zeta / h.
struct StationarityResult {
  double residual = 0.0;
  std::vector<int> active;
  VectorXd zeta;    // over `active`, zeta >= 0, sum = 1
  VectorXd xi;      // length n: zeta_i/h_i(x) on N(x), 0 elsewhere
  double fw_gap = 0.0;
  long iterations = 0;
};

enum class Verdict {
  kCertifiedFold,
  kStationaryButDegenerate,
  kNotStationary,
  kFailedSolution,
};

const char* verdict_name(Verdict v);

// Machine-checkable sufficiency checklist at a candidate (x*, lambda*): the
// point solves the system, has a full active set, is stationary, the
// Jacobian passes the sign/irreducibility check there, has a one-dimensional
// kernel with strictly positive left/right null vectors, and the weight
// vector is transversal to the Jacobian's range.
struct FoldCertificate {
  VectorXd x;
  double lambda = 0.0;

  double solution_residual = 0.0;  // |g(x) - lambda*h(x)|_inf
  double tol_res = 0.0;

  bool active_full = false;
  int active_count = 0;

  StationarityResult stationarity;
  double tol_stationarity = kTolStationarityDefault;

  RCheckReport r_check;            // at (x, lambda)
  bool structural_r = false;
  PerronCertificate kernel;        // kernel mode of J_x f(x, lambda)

  bool right_positive = false;
  bool left_positive = false;

  double transversality = 0.0;     // <h(x), xi*> with xi* the left null vector
  double tol_trans = 0.0;

  Verdict verdict = Verdict::kFailedSolution;
  std::string note;

  bool certified() const { return verdict == Verdict::kCertifiedFold; }
};

// Root-probe evidence that f(x, lambda) = 0 has no solutions in Q.
struct ProbeReport {
  double lambda = 0.0;
  int attempts = 0;
  std::vector<VectorXd> converged_in_Q;  // distinct roots inside Q
  std::vector<double> root_residuals;    // |f|_inf at each root
  int converged_outside = 0;
  double max_residual_drop = 0.0;        // best |f| decrease over the starts
};

// Minimum-norm-in-hull over the active gradients at x; throws EmptyActiveSet.
StationarityResult stationarity_residual(const ParametricSystem& system,
                                         const VectorXd& x);

// Runs the full checklist; the verdict short-circuits to the weakest class
// that applies (failed-solution < not-stationary < stationary-but-degenerate
// < certified-fold). Throws DomainViolation when x is outside Q.
FoldCertificate certify_saddle_node(const ParametricSystem& system,
                                    const VectorXd& x, double lambda);

// Damped Newton on x -> g(x) - lambda*h(x) from each start; roots inside Q
// with residual <= root_tol are collected and deduplicated. An empty root
// list is evidence (not proof) of "no solutions above".
ProbeReport probe_no_solutions_above(const ParametricSystem& system,
                                     double lambda,
                                     const std::vector<VectorXd>& starts,
                                     int threads = 0,
                                     double root_tol = 1e-10);

// Seeded sample of probe starts from the system's sampling box.
std::vector<VectorXd> probe_starts(const ParametricSystem& system, int count,
                                   std::uint64_t seed);

std::string certificate_to_text(const FoldCertificate& cert);

}  // namespace foldfinder
