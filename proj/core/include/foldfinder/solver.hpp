#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "foldfinder/ratio.hpp"
#include "foldfinder/system.hpp"

namespace foldfinder {

enum class Strategy {
  kEpigraphSlp,     // default: linearize ratios, LP step in an l-inf trust region
  kSmoothedAscent,  // softmin smoothing with a tightening schedule
  kSubgradient,     // minimum-norm subgradient ascent, diminishing steps
  kGridOracle,      // exhaustive grid evaluation, n <= 3, ground truth
};

struct SolveConfig {
  Strategy strategy = Strategy::kEpigraphSlp;
  int max_iters = 500;               // per start
  double tol_step = 1e-10;           // relative step stop
  double tol_stationarity = 1e-7;    // min-norm-subgradient stop
  int multistart = 8;
  std::uint64_t seed = 0;
  std::vector<double> smoothing_schedule = {1e-1, 1e-2, 1e-3,
                                            1e-4, 1e-5, 1e-6};
  double trust_radius_init = 0.1;    // relative l-inf radius (epigraph-slp)
  std::vector<int> grid_resolution;  // per axis; single value replicates
  int threads = 0;                   // 0 = FOLDFINDER_THREADS or cores

  void validate() const;  // throws Error on nonsensical settings
};

enum class Termination {
  kStepTol,
  kStationarity,
  kIterationCap,
  kInfeasibleStart,
};

struct IterationRecord {
  double lambda = 0.0;  // functional value after the iteration
  double step = 0.0;    // accepted step length (l2)
};

// Per-start log, merged deterministically by start index.
struct StartTrace {
  int start_index = 0;
  VectorXd x0;
  double lambda0 = 0.0;
  Termination termination = Termination::kInfeasibleStart;
  std::vector<IterationRecord> iterations;
  VectorXd x_final;
  double lambda_final = 0.0;
  double stationarity_residual = 0.0;
  bool unbounded_suspected = false;
};

struct SolveResult {
  VectorXd x_star;
  double lambda_star = 0.0;
  RatioProfile profile;                 // at x_star
  double stationarity_residual = 0.0;   // min-norm element of the active hull
  int starts_converged = 0;
  int best_start_index = -1;
  std::vector<StartTrace> trace;
  bool unbounded_suspected = false;
};

// Maximizes lambda(x) = min_i r_i(x) over Q from seeded multistarts.
// Throws InfeasibleStart when no start point has a defined ratio profile,
// DimensionTooLarge for the grid oracle above n = 3.
SolveResult solve_maxmin(const ParametricSystem& system,
                         const SolveConfig& config);

// Exhaustive evaluation over an inclusive uniform grid on `box`; ties broken
// toward the lexicographically smallest point. Ground truth for n <= 3.
SolveResult grid_oracle(const ParametricSystem& system,
                        const std::pair<VectorXd, VectorXd>& box,
                        const std::vector<int>& resolution);

// Softmin smoothing lambda_mu(x) = -mu*log sum_i exp(-r_i(x)/mu) over the
// defined ratios; brackets the true value by
//   lambda_mu(x) <= lambda(x) <= lambda_mu(x) + mu*log n.
double softmin_value(const ParametricSystem& system, const VectorXd& x,
                     double mu);

// Value and gradient together (gradient = softmin-weighted ratio gradients).
std::pair<double, VectorXd> softmin_value_gradient(
    const ParametricSystem& system, const VectorXd& x, double mu);

// Norm of the minimum-norm element of conv{grad r_i : i active at x}: the
// solver's stationarity measure (also used by the certificate checklist).
double min_subgradient_norm(const ParametricSystem& system, const VectorXd& x);

}  // namespace foldfinder
