#include "foldfinder/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "foldfinder/errors.hpp"
#include "foldfinder/hull.hpp"
#include "foldfinder/linprog.hpp"
#include "foldfinder/util.hpp"

namespace foldfinder {

void SolveConfig::validate() const {
  if (max_iters <= 0) throw Error("solver: max_iters must be positive");
  if (!(tol_step > 0) || !(tol_stationarity > 0))
    throw Error("solver: tolerances must be positive");
  if (multistart < 1) throw Error("solver: multistart must be >= 1");
  if (strategy == Strategy::kSmoothedAscent) {
    if (smoothing_schedule.empty())
      throw Error("solver: smoothing schedule must be nonempty");
    for (std::size_t k = 0; k < smoothing_schedule.size(); ++k) {
      if (!(smoothing_schedule[k] > 0))
        throw Error("solver: smoothing parameters must be positive");
      if (k > 0 && !(smoothing_schedule[k] < smoothing_schedule[k - 1]))
        throw Error("solver: smoothing schedule must decrease");
    }
  }
  if (strategy == Strategy::kEpigraphSlp && !(trust_radius_init > 0))
    throw Error("solver: trust radius must be positive");
}

double softmin_value(const ParametricSystem& system, const VectorXd& x,
                     double mu) {
  RatioProfile p = ratio_profile(system, x);
  const double m = p.lambda_of_x;
  double sum = 0.0;
  for (const auto& r : p.ratios)
    if (r) sum += std::exp((m - *r) / mu);
  return m - mu * std::log(sum);
}

std::pair<double, VectorXd> softmin_value_gradient(
    const ParametricSystem& system, const VectorXd& x, double mu) {
  RatioGradients rg = ratio_gradients(system, x);
  const double m = rg.profile.lambda_of_x;
  double sum = 0.0;
  VectorXd weighted = VectorXd::Zero(system.n);
  for (int i = 0; i < system.n; ++i) {
    if (!rg.defined[static_cast<std::size_t>(i)]) continue;
    double w = std::exp((m - *rg.profile.ratios[static_cast<std::size_t>(i)]) / mu);
    sum += w;
    weighted += w * rg.grad.row(i).transpose();
  }
  return {m - mu * std::log(sum), weighted / sum};
}

double min_subgradient_norm(const ParametricSystem& system, const VectorXd& x) {
  RatioProfile p = ratio_profile(system, x);
  Subdifferential sd = subdifferential(system, p);
  return min_norm_in_hull(sd.gradients).norm;
}

namespace {

// Profile evaluation that never throws: local steps probe points where the
// functional may stop being defined, and those trials are simply rejected.
std::optional<RatioProfile> try_profile(const ParametricSystem& system,
                                        const VectorXd& x) {
  try {
    RatioProfile p = ratio_profile(system, x);
    if (!std::isfinite(p.lambda_of_x)) return std::nullopt;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// A trial point is acceptable only if every ratio defined at the current
// point stays defined (treating a vanishing-weight transition as lambda =
// -infinity keeps iterates where the functional is meaningful).
bool keeps_defined(const RatioProfile& before, const RatioProfile& after) {
  for (std::size_t i = 0; i < before.ratios.size(); ++i)
    if (before.ratios[i].has_value() && !after.ratios[i].has_value())
      return false;
  return true;
}

double stationarity_or_inf(const ParametricSystem& system, const VectorXd& x) {
  try {
    return min_subgradient_norm(system, x);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Heuristic for sup lambda = +infinity (the certificate needs a finite
// maximum): an iteration-cap stop that was still making steady progress
// while drifting out of the sampling box is flagged as suspect.
bool looks_unbounded(const std::vector<IterationRecord>& records,
                     const VectorXd& x_final,
                     const std::pair<VectorXd, VectorXd>& box) {
  const std::size_t window = 20;
  if (records.size() < window) return false;
  double lam_now = records.back().lambda;
  double lam_then = records[records.size() - window].lambda;
  if (lam_now - lam_then <= 1e-8 * (1.0 + std::abs(lam_now))) return false;
  for (Eigen::Index j = 0; j < x_final.size(); ++j) {
    double width = box.second[j] - box.first[j];
    if (x_final[j] > box.second[j] + 0.1 * width ||
        x_final[j] < box.first[j] - 0.1 * width)
      return true;
  }
  return false;
}

// --- stationarity polish ------------------------------------------------

// Hessians of the ratios in `indices` by central differences of the
// analytic gradient rows (one-sided at the domain boundary). All rows come
// from shared ratio_gradients evaluations: 2n Jacobian evaluations total.
std::optional<std::vector<MatrixXd>> ratio_hessians_fd(
    const ParametricSystem& system, const VectorXd& x,
    const std::vector<int>& indices) {
  const int n = system.n;
  std::vector<MatrixXd> H(indices.size(), MatrixXd::Zero(n, n));
  for (int j = 0; j < n; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    VectorXd xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    if (!system.domain.contains(xp)) xp = x;
    if (!system.domain.contains(xm)) xm = x;
    const double span = xp[j] - xm[j];
    if (!(span > 0)) return std::nullopt;
    RatioGradients gp, gm;
    try {
      gp = ratio_gradients(system, xp);
      gm = ratio_gradients(system, xm);
    } catch (const Error&) {
      return std::nullopt;
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const int i = indices[k];
      if (!gp.defined[static_cast<std::size_t>(i)] ||
          !gm.defined[static_cast<std::size_t>(i)])
        return std::nullopt;
      H[k].col(j) = (gp.grad.row(i) - gm.grad.row(i)).transpose() / span;
    }
  }
  for (auto& Hk : H) Hk = MatrixXd(0.5 * (Hk + Hk.transpose()));
  return H;
}

// One Newton solve of the minimax first-order system on a fixed index set A:
//   r_i(x) - nu = 0            (i in A)
//   sum_i zeta_i grad r_i = 0
//   sum_i zeta_i - 1 = 0.
// Returns the polished point when Newton converges with simplex-feasible
// weights (mildly negative weights drop the offending index and retry).
std::optional<VectorXd> kkt_polish_on(const ParametricSystem& system,
                                      const VectorXd& x_start, double nu_start,
                                      std::vector<int> active) {
  const int n = system.n;
  for (int attempt = 0; attempt < 3 && !active.empty(); ++attempt) {
    const int m = static_cast<int>(active.size());
    VectorXd x = x_start;
    VectorXd zeta = VectorXd::Constant(m, 1.0 / m);
    double nu = nu_start;

    bool converged = false;
    for (int it = 0; it < 30; ++it) {
      auto profile = try_profile(system, x);
      if (!profile) break;
      VectorXd r(m);
      MatrixXd G(n, m);  // column k = grad r_{A_k}
      bool defined = true;
      for (int k = 0; k < m; ++k) {
        const auto& rv = profile->ratios[static_cast<std::size_t>(active[k])];
        if (!rv) {
          defined = false;
          break;
        }
        r[k] = *rv;
        G.col(k) = ratio_gradient(system, x, active[k]);
      }
      if (!defined) break;

      VectorXd F(m + n + 1);
      F.head(m) = r - VectorXd::Constant(m, nu);
      F.segment(m, n) = G * zeta;
      F[m + n] = zeta.sum() - 1.0;
      const double scale = 1.0 + std::abs(nu) + G.cwiseAbs().maxCoeff();
      if (F.lpNorm<Eigen::Infinity>() <= 1e-13 * scale) {
        converged = true;
        break;
      }

      auto hessians = ratio_hessians_fd(system, x, active);
      if (!hessians) break;
      MatrixXd Hz = MatrixXd::Zero(n, n);
      for (int k = 0; k < m; ++k)
        if (zeta[k] != 0.0) Hz += zeta[k] * (*hessians)[static_cast<std::size_t>(k)];

      MatrixXd M = MatrixXd::Zero(m + n + 1, m + n + 1);
      M.block(0, 0, m, n) = G.transpose();
      M.block(0, n + m, m, 1).setConstant(-1.0);
      M.block(m, 0, n, n) = Hz;
      M.block(m, n, n, m) = G;
      M.block(m + n, n, 1, m).setOnes();
      VectorXd delta = M.colPivHouseholderQr().solve(-F);
      if (!delta.allFinite()) break;

      VectorXd dx = delta.head(n);
      // Full Newton steps in the interior; back off only when the boundary
      // actually truncates the step.
      const double frac = system.domain.max_feasible_fraction(x, dx);
      const double alpha = frac >= 1.0 ? 1.0 : 0.9 * frac;
      if (alpha <= 0.0) break;
      x += alpha * dx;
      zeta += alpha * delta.segment(n, m);
      nu += alpha * delta[m + n];
    }
    if (!converged) return std::nullopt;

    if (zeta.minCoeff() < -1e-6 && m > 1) {
      int worst = 0;
      zeta.minCoeff(&worst);
      active.erase(active.begin() + worst);
      continue;
    }
    return x;
  }
  return std::nullopt;
}

// Newton polish at the merged best point. The main loops deliver ~1e-6
// accuracy; this pushes the point to the rounding floor so the
// certificate's stationarity and kernel clauses see a genuinely converged
// candidate. Candidate index sets, in order: every defined ratio (the
// f(x, lambda) = 0 structure of a fold, right whenever the solution system
// holds componentwise), then the loosely active set. A result is adopted
// only when it does not lower lambda.
bool kkt_polish(const ParametricSystem& system, VectorXd& x_io) {
  const int n = system.n;
  auto initial = try_profile(system, x_io);
  if (!initial) return false;

  std::vector<int> all_defined;
  std::vector<int> loose;
  for (int i = 0; i < n; ++i) {
    const auto& r = initial->ratios[static_cast<std::size_t>(i)];
    if (!r) continue;
    all_defined.push_back(i);
    if (*r - initial->lambda_of_x <=
        1e-5 * (1.0 + std::abs(initial->lambda_of_x)))
      loose.push_back(i);
  }

  std::vector<std::vector<int>> candidates;
  candidates.push_back(all_defined);
  if (loose.size() < all_defined.size()) candidates.push_back(loose);

  for (const auto& active : candidates) {
    auto x = kkt_polish_on(system, x_io, initial->lambda_of_x, active);
    if (!x) continue;
    auto final_profile = try_profile(system, *x);
    if (!final_profile) continue;
    if (final_profile->lambda_of_x <
        initial->lambda_of_x - 1e-10 * (1.0 + std::abs(initial->lambda_of_x)))
      continue;
    x_io = *x;
    return true;
  }
  return false;
}

// --- epigraph SLP -----------------------------------------------------------

void solve_epigraph_slp(const ParametricSystem& system,
                        const SolveConfig& config, StartTrace& trace) {
  const int n = system.n;
  auto profile_opt = try_profile(system, trace.x0);
  if (!profile_opt) {
    trace.termination = Termination::kInfeasibleStart;
    return;
  }
  VectorXd x = trace.x0;
  RatioProfile profile = *profile_opt;
  trace.lambda0 = profile.lambda_of_x;
  double radius = config.trust_radius_init;
  trace.termination = Termination::kIterationCap;

  for (int it = 0; it < config.max_iters; ++it) {
    RatioGradients rg = ratio_gradients(system, x);
    const double lambda = rg.profile.lambda_of_x;
    const int defined = rg.profile.defined_count();

    // LP variables z = [t, e+, e-]: maximize t subject to
    //   t - grad r_i . (e+ - e-) <= r_i - lambda   (defined i)
    //   e+_j <= up_j,  e-_j <= dn_j                (trust region inside Q)
    // All right-hand sides are >= 0, so the slack basis starts feasible.
    VectorXd up(n), dn(n);
    for (int j = 0; j < n; ++j) {
      double r = radius * (1.0 + std::abs(x[j]));
      double gap_up = std::isfinite(system.domain.upper[j])
                          ? 0.5 * (system.domain.upper[j] - x[j])
                          : r;
      double gap_dn = std::isfinite(system.domain.lower[j])
                          ? 0.5 * (x[j] - system.domain.lower[j])
                          : r;
      up[j] = std::max(std::min(r, gap_up), 0.0);
      dn[j] = std::max(std::min(r, gap_dn), 0.0);
    }

    const Eigen::Index rows = defined + 2 * n;
    const Eigen::Index cols = 1 + 2 * n;
    MatrixXd A = MatrixXd::Zero(rows, cols);
    VectorXd b(rows);
    Eigen::Index row = 0;
    for (int i = 0; i < n; ++i) {
      if (!rg.defined[static_cast<std::size_t>(i)]) continue;
      A(row, 0) = 1.0;
      A.block(row, 1, 1, n) = -rg.grad.row(i);
      A.block(row, 1 + n, 1, n) = rg.grad.row(i);
      b[row] = *rg.profile.ratios[static_cast<std::size_t>(i)] - lambda;
      ++row;
    }
    for (int j = 0; j < n; ++j) {
      A(row, 1 + j) = 1.0;
      b[row] = up[j];
      ++row;
      A(row, 1 + n + j) = 1.0;
      b[row] = dn[j];
      ++row;
    }
    VectorXd c = VectorXd::Zero(cols);
    c[0] = 1.0;

    LpResult lp = simplex_maximize(c, A, b);
    const double predicted = lp.objective;
    VectorXd e = lp.x.segment(1, n) - lp.x.segment(1 + n, n);

    if (predicted <= 1e-13 * (1.0 + std::abs(lambda))) {
      // No linear ascent within this radius: either stationary or the
      // region is too wide for the local model.
      double stat = stationarity_or_inf(system, x);
      if (stat <= config.tol_stationarity) {
        trace.termination = Termination::kStationarity;
        break;
      }
      radius *= 0.5;
      if (radius < 1e-15) {
        trace.termination = Termination::kStepTol;
        break;
      }
      continue;
    }

    VectorXd trial = x + e;
    auto trial_profile = try_profile(system, trial);
    bool accept = trial_profile && keeps_defined(rg.profile, *trial_profile) &&
                  trial_profile->lambda_of_x > lambda;
    if (!accept) {
      radius *= 0.5;
      if (radius < 1e-15) {
        trace.termination = Termination::kStepTol;
        break;
      }
      continue;
    }

    const double actual = trial_profile->lambda_of_x - lambda;
    const double agreement = actual / predicted;
    const double step_len = e.norm();
    x = trial;
    profile = *trial_profile;
    trace.iterations.push_back({profile.lambda_of_x, step_len});
    if (agreement > 0.75)
      radius = std::min(radius * 1.6, 10.0);
    else if (agreement < 0.1)
      radius *= 0.5;

    if (step_len <= config.tol_step * (1.0 + x.norm())) {
      double stat = stationarity_or_inf(system, x);
      trace.termination = stat <= config.tol_stationarity
                              ? Termination::kStationarity
                              : Termination::kStepTol;
      break;
    }
  }

  trace.lambda_final = profile.lambda_of_x;
  trace.stationarity_residual = stationarity_or_inf(system, x);
  trace.x_final = std::move(x);
}

// --- smoothed ascent --------------------------------------------------------

void solve_smoothed(const ParametricSystem& system, const SolveConfig& config,
                    StartTrace& trace) {
  auto profile_opt = try_profile(system, trace.x0);
  if (!profile_opt) {
    trace.termination = Termination::kInfeasibleStart;
    return;
  }
  VectorXd x = trace.x0;
  RatioProfile profile = *profile_opt;
  trace.lambda0 = profile.lambda_of_x;
  trace.termination = Termination::kIterationCap;

  const int per_stage = std::max(
      30, config.max_iters / static_cast<int>(config.smoothing_schedule.size()));
  bool step_stop = false;
  for (double mu : config.smoothing_schedule) {
    for (int it = 0; it < per_stage; ++it) {
      auto [value, grad] = softmin_value_gradient(system, x, mu);
      double gnorm = grad.norm();
      if (gnorm <= 1e-9 * (1.0 + std::abs(value))) break;

      double alpha = (1.0 + x.norm()) / (1.0 + gnorm);
      alpha *= system.domain.max_feasible_fraction(x, alpha * grad);
      bool accepted = false;
      for (int back = 0; back < 50 && alpha > 0; ++back) {
        VectorXd trial = x + alpha * grad;
        if (system.domain.contains(trial)) {
          auto tp = try_profile(system, trial);
          if (tp && keeps_defined(profile, *tp)) {
            double tv = softmin_value(system, trial, mu);
            if (tv >= value + 1e-4 * alpha * gnorm * gnorm) {
              double step_len = alpha * gnorm;
              x = trial;
              profile = *tp;
              trace.iterations.push_back({profile.lambda_of_x, step_len});
              accepted = true;
              if (step_len <= config.tol_step * (1.0 + x.norm()))
                step_stop = true;
              break;
            }
          }
        }
        alpha *= 0.5;
      }
      if (!accepted || step_stop) break;
    }
    if (step_stop) break;
  }

  double stat = stationarity_or_inf(system, x);
  trace.stationarity_residual = stat;
  trace.termination = stat <= config.tol_stationarity
                          ? Termination::kStationarity
                          : Termination::kStepTol;
  trace.lambda_final = profile.lambda_of_x;
  trace.x_final = std::move(x);
}

// --- subgradient ------------------------------------------------------------

void solve_subgradient(const ParametricSystem& system,
                       const SolveConfig& config, StartTrace& trace) {
  auto profile_opt = try_profile(system, trace.x0);
  if (!profile_opt) {
    trace.termination = Termination::kInfeasibleStart;
    return;
  }
  VectorXd x = trace.x0;
  RatioProfile profile = *profile_opt;
  trace.lambda0 = profile.lambda_of_x;

  VectorXd best_x = x;
  double best_lambda = profile.lambda_of_x;
  trace.termination = Termination::kIterationCap;

  int null_steps = 0;
  for (int k = 0; k < config.max_iters; ++k) {
    Subdifferential sd = subdifferential(system, profile);
    MinNormResult mn = min_norm_in_hull(sd.gradients);
    if (mn.norm <= config.tol_stationarity) {
      trace.termination = Termination::kStationarity;
      break;
    }
    VectorXd dir = mn.point / mn.norm;

    // Classical diminishing step rule; the best iterate is tracked because
    // subgradient steps are not monotone.
    double alpha = 0.1 * (1.0 + x.norm()) / (1.0 + static_cast<double>(k) / 10.0);
    alpha *= system.domain.max_feasible_fraction(x, alpha * dir);
    bool moved = false;
    for (int back = 0; back < 30 && alpha > 1e-16 * (1.0 + x.norm()); ++back) {
      VectorXd trial = x + alpha * dir;
      if (system.domain.contains(trial)) {
        auto tp = try_profile(system, trial);
        if (tp && keeps_defined(profile, *tp)) {
          x = trial;
          profile = *tp;
          trace.iterations.push_back({profile.lambda_of_x, alpha});
          if (profile.lambda_of_x > best_lambda) {
            best_lambda = profile.lambda_of_x;
            best_x = x;
          }
          moved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!moved) {
      if (++null_steps >= 5) {
        trace.termination = Termination::kStepTol;
        break;
      }
    } else {
      null_steps = 0;
    }
  }

  trace.stationarity_residual = stationarity_or_inf(system, best_x);
  trace.lambda_final = best_lambda;
  trace.x_final = std::move(best_x);
}

// --- multistart orchestration ------------------------------------------------

bool lexicographically_less(const VectorXd& a, const VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

}  // namespace

SolveResult grid_oracle(const ParametricSystem& system,
                        const std::pair<VectorXd, VectorXd>& box,
                        const std::vector<int>& resolution) {
  if (system.n > 3)
    throw DimensionTooLarge(
        "grid oracle is exhaustive and limited to n <= 3 problems");
  std::vector<int> res(static_cast<std::size_t>(system.n));
  if (resolution.size() == 1)
    res.assign(static_cast<std::size_t>(system.n), resolution[0]);
  else if (resolution.size() == static_cast<std::size_t>(system.n))
    res.assign(resolution.begin(), resolution.end());
  else
    throw Error("grid oracle: resolution must list one count or one per axis");
  for (int r : res)
    if (r < 2) throw Error("grid oracle: resolution must be >= 2 per axis");

  VectorXd x(system.n);
  std::vector<int> idx(static_cast<std::size_t>(system.n), 0);
  auto coord = [&](int j) {
    return box.first[j] + (box.second[j] - box.first[j]) *
                              static_cast<double>(idx[static_cast<std::size_t>(j)]) /
                              static_cast<double>(res[static_cast<std::size_t>(j)] - 1);
  };

  bool found = false;
  double best_lambda = -std::numeric_limits<double>::infinity();
  VectorXd best_x;
  // Odometer with the first axis slowest: scan order == lexicographic order
  // on x, so keeping strict improvements breaks ties toward the smallest x.
  for (;;) {
    for (int j = 0; j < system.n; ++j) x[j] = coord(j);
    auto p = try_profile(system, x);
    if (p && p->lambda_of_x > best_lambda) {
      best_lambda = p->lambda_of_x;
      best_x = x;
      found = true;
    }
    int j = system.n - 1;
    while (j >= 0) {
      if (++idx[static_cast<std::size_t>(j)] <
          res[static_cast<std::size_t>(j)])
        break;
      idx[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  if (!found)
    throw InfeasibleStart("grid oracle: no grid point has a defined ratio");

  SolveResult out;
  out.x_star = best_x;
  out.lambda_star = best_lambda;
  out.profile = ratio_profile(system, best_x);
  out.stationarity_residual = stationarity_or_inf(system, best_x);
  out.starts_converged = 1;
  out.best_start_index = 0;
  StartTrace t;
  t.start_index = 0;
  t.x0 = best_x;
  t.x_final = best_x;
  t.lambda0 = best_lambda;
  t.lambda_final = best_lambda;
  t.termination = Termination::kStepTol;
  t.stationarity_residual = out.stationarity_residual;
  out.trace.push_back(std::move(t));
  return out;
}

SolveResult solve_maxmin(const ParametricSystem& system,
                         const SolveConfig& config) {
  system.validate();
  config.validate();
  const auto box = system.sampling_bounds();

  if (config.strategy == Strategy::kGridOracle) {
    std::vector<int> res =
        config.grid_resolution.empty() ? std::vector<int>{400}
                                       : config.grid_resolution;
    return grid_oracle(system, box, res);
  }

  const int count = config.multistart;
  std::vector<StartTrace> traces(static_cast<std::size_t>(count));

  // Start 0 anchors at the problem's seed point when it lies in the sampling
  // box; the rest are seeded samples. Per-start generators keep the run
  // deterministic under any thread schedule.
  for (int i = 0; i < count; ++i) {
    StartTrace& t = traces[static_cast<std::size_t>(i)];
    t.start_index = i;
    Rng rng(config.seed * 0x100000001b3ull + static_cast<std::uint64_t>(i));
    if (i == 0 && system.seed_point &&
        system.domain.contains(*system.seed_point) &&
        try_profile(system, *system.seed_point)) {
      t.x0 = *system.seed_point;
      continue;
    }
    bool ok = false;
    for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
      VectorXd x = rng.point(box.first, box.second);
      if (system.domain.contains(x) && try_profile(system, x)) {
        t.x0 = x;
        ok = true;
      }
    }
    if (!ok) t.x0 = VectorXd();  // marks the start infeasible
  }

  const int threads = resolve_thread_count(config.threads);
  parallel_for(count, threads, [&](int i) {
    StartTrace& t = traces[static_cast<std::size_t>(i)];
    if (t.x0.size() == 0) {
      t.termination = Termination::kInfeasibleStart;
      return;
    }
    switch (config.strategy) {
      case Strategy::kEpigraphSlp: solve_epigraph_slp(system, config, t); break;
      case Strategy::kSmoothedAscent: solve_smoothed(system, config, t); break;
      case Strategy::kSubgradient: solve_subgradient(system, config, t); break;
      case Strategy::kGridOracle: break;  // handled above
    }
    t.unbounded_suspected = t.termination == Termination::kIterationCap &&
                            t.x_final.size() > 0 &&
                            looks_unbounded(t.iterations, t.x_final, box);
  });

  int best = -1;
  for (int i = 0; i < count; ++i) {
    const StartTrace& t = traces[static_cast<std::size_t>(i)];
    if (t.termination == Termination::kInfeasibleStart) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const StartTrace& b = traces[static_cast<std::size_t>(best)];
    const double tie = 1e-12 * (1.0 + std::abs(b.lambda_final));
    if (t.lambda_final > b.lambda_final + tie) {
      best = i;
    } else if (std::abs(t.lambda_final - b.lambda_final) <= tie) {
      if (t.stationarity_residual < b.stationarity_residual ||
          (t.stationarity_residual == b.stationarity_residual &&
           lexicographically_less(t.x_final, b.x_final)))
        best = i;
    }
  }
  if (best < 0)
    throw InfeasibleStart(
        "no sampled start point has a defined ratio profile");

  SolveResult out;
  const StartTrace& bt = traces[static_cast<std::size_t>(best)];
  out.x_star = bt.x_final;
  out.stationarity_residual = bt.stationarity_residual;

  // Final Newton polish on the winning point; kept only when it does not
  // lower lambda and improves the first-order residual.
  VectorXd polished = bt.x_final;
  if (kkt_polish(system, polished)) {
    const double stat = stationarity_or_inf(system, polished);
    if (stat <= out.stationarity_residual) {
      out.x_star = polished;
      out.stationarity_residual = stat;
    }
  }
  out.profile = ratio_profile(system, out.x_star);
  out.lambda_star = out.profile.lambda_of_x;
  out.best_start_index = best;
  out.unbounded_suspected = bt.unbounded_suspected;
  for (const auto& t : traces)
    out.starts_converged += (t.termination == Termination::kStepTol ||
                             t.termination == Termination::kStationarity)
                                ? 1
                                : 0;
  out.trace = std::move(traces);
  return out;
}

}  // namespace foldfinder
