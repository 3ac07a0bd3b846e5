#include "foldfinder/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "foldfinder/errors.hpp"
#include "foldfinder/hull.hpp"
#include "foldfinder/newton.hpp"
#include "foldfinder/util.hpp"

namespace foldfinder {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kCertifiedFold: return "certified-fold";
    case Verdict::kStationaryButDegenerate: return "stationary-but-degenerate";
    case Verdict::kNotStationary: return "not-stationary";
    case Verdict::kFailedSolution: return "failed-solution";
  }
  return "?";
}

StationarityResult stationarity_residual(const ParametricSystem& system,
                                         const VectorXd& x) {
  RatioProfile profile = ratio_profile(system, x);
  Subdifferential sd = subdifferential(system, profile);
  MinNormResult mn = min_norm_in_hull(sd.gradients);

  StationarityResult res;
  res.residual = mn.norm;
  res.active = sd.indices;
  res.zeta = mn.zeta;
  res.fw_gap = mn.fw_gap;
  res.iterations = mn.iterations;

  // The proof-side map from simplex weights to the left null candidate.
  const VectorXd hx = system.eval_h(x);
  res.xi = VectorXd::Zero(system.n);
  for (std::size_t k = 0; k < sd.indices.size(); ++k)
    res.xi[sd.indices[k]] = mn.zeta[static_cast<Eigen::Index>(k)] /
                            hx[sd.indices[k]];
  return res;
}

FoldCertificate certify_saddle_node(const ParametricSystem& system,
                                    const VectorXd& x, double lambda) {
  system.require_in_domain(x);

  FoldCertificate cert;
  cert.x = x;
  cert.lambda = lambda;
  cert.structural_r = system.structural_r;

  const VectorXd gx = system.eval_g(x);
  const VectorXd hx = system.eval_h(x);
  cert.solution_residual = (gx - lambda * hx).lpNorm<Eigen::Infinity>();
  cert.tol_res =
      1e-8 * (1.0 + std::abs(lambda)) * hx.cwiseAbs().maxCoeff();

  RatioProfile profile = ratio_profile(system, x);
  cert.active_count = static_cast<int>(profile.active.size());
  cert.active_full = profile.full_active;

  bool stationarity_ok = false;
  try {
    cert.stationarity = stationarity_residual(system, x);
    stationarity_ok = cert.stationarity.residual <= cert.tol_stationarity;
  } catch (const Error& e) {
    cert.stationarity.residual = std::numeric_limits<double>::infinity();
    cert.note = std::string("stationarity unavailable: ") + e.what();
  }

  const MatrixXd J = system.eval_jac_f(x, lambda);
  cert.r_check = check_condition_r_matrix(J);
  // The kernel rank cutoff must see the scale of the operators J was built
  // from, not of J itself: at a scalar fold, J is entirely near zero.
  const double jac_scale =
      system.eval_jac_g(x).cwiseAbs().maxCoeff() +
      std::abs(lambda) * system.eval_jac_h(x).cwiseAbs().maxCoeff();
  cert.kernel = perron_pair(J, PerronMode::kKernel, jac_scale);

  cert.right_positive = cert.kernel.right_vec.size() > 0 &&
                        cert.kernel.right_vec.minCoeff() > kPositivityTol;
  cert.left_positive = cert.kernel.left_vec.size() > 0 &&
                       cert.kernel.left_vec.minCoeff() > kPositivityTol;

  cert.transversality = hx.dot(cert.kernel.left_vec);
  cert.tol_trans = 1e-6 * hx.norm() * cert.kernel.left_vec.norm();

  if (cert.solution_residual > cert.tol_res) {
    cert.verdict = Verdict::kFailedSolution;
  } else if (!stationarity_ok) {
    cert.verdict = Verdict::kNotStationary;
  } else if (cert.active_full && cert.r_check.passes() &&
             cert.kernel.kernel_dim_estimate == 1 && cert.right_positive &&
             cert.left_positive &&
             std::abs(cert.transversality) > cert.tol_trans) {
    cert.verdict = Verdict::kCertifiedFold;
  } else {
    cert.verdict = Verdict::kStationaryButDegenerate;
  }

  if (cert.verdict == Verdict::kCertifiedFold) {
    cert.note =
        "maximal relative to evidence (multistart history and root probes); "
        "global maximality is not decidable numerically";
    if (!system.structural_r)
      cert.note += "; condition-R evidence at this point is sampled, not "
                   "structural";
  }
  return cert;
}

ProbeReport probe_no_solutions_above(const ParametricSystem& system,
                                     double lambda,
                                     const std::vector<VectorXd>& starts,
                                     int threads, double root_tol) {
  ProbeReport report;
  report.lambda = lambda;
  report.attempts = static_cast<int>(starts.size());

  auto F = [&](const VectorXd& x) { return system.eval_f(x, lambda); };
  auto J = [&](const VectorXd& x) { return system.eval_jac_f(x, lambda); };

  NewtonOptions options;
  options.tol_inf = root_tol;
  options.max_iters = 200;

  std::vector<NewtonResult> results(starts.size());
  parallel_for(static_cast<int>(starts.size()), resolve_thread_count(threads),
               [&](int i) {
                 results[static_cast<std::size_t>(i)] = damped_newton(
                     F, J, starts[static_cast<std::size_t>(i)], options);
               });

  for (const auto& r : results) {
    if (std::isfinite(r.initial_residual_inf))
      report.max_residual_drop = std::max(
          report.max_residual_drop, r.initial_residual_inf - r.residual_inf);
    if (!r.converged) continue;
    if (!system.domain.contains(r.x)) {
      ++report.converged_outside;
      continue;
    }
    bool duplicate = false;
    for (const auto& seen : report.converged_in_Q)
      if ((seen - r.x).lpNorm<Eigen::Infinity>() <=
          1e-6 * (1.0 + seen.lpNorm<Eigen::Infinity>())) {
        duplicate = true;
        break;
      }
    if (!duplicate) {
      report.converged_in_Q.push_back(r.x);
      report.root_residuals.push_back(r.residual_inf);
    }
  }
  return report;
}

std::vector<VectorXd> probe_starts(const ParametricSystem& system, int count,
                                   std::uint64_t seed) {
  const auto box = system.sampling_bounds();
  std::vector<VectorXd> starts;
  starts.reserve(static_cast<std::size_t>(count));
  Rng rng(seed);
  while (static_cast<int>(starts.size()) < count) {
    VectorXd x = rng.point(box.first, box.second);
    if (system.domain.contains(x)) starts.push_back(std::move(x));
  }
  return starts;
}

std::string certificate_to_text(const FoldCertificate& cert) {
  std::ostringstream os;
  os.precision(12);
  auto mark = [](bool ok) { return ok ? "pass" : "FAIL"; };
  os << "fold certificate at lambda = " << cert.lambda << "\n";
  os << "  solution residual |g - lambda*h|_inf = " << cert.solution_residual
     << "  (tol " << cert.tol_res << ")  "
     << mark(cert.solution_residual <= cert.tol_res) << "\n";
  os << "  active set size " << cert.active_count << " of "
     << cert.x.size() << "  " << mark(cert.active_full) << "\n";
  os << "  stationarity residual = " << cert.stationarity.residual
     << "  (tol " << cert.tol_stationarity << ")  "
     << mark(cert.stationarity.residual <= cert.tol_stationarity) << "\n";
  os << "  off-diagonal sign constant: " << mark(cert.r_check.sign_constant)
     << ", irreducible: " << mark(cert.r_check.irreducible)
     << " (sccs " << cert.r_check.scc_count << ")"
     << (cert.structural_r ? "  [structural]" : "  [sampled evidence]")
     << "\n";
  os << "  kernel dimension estimate = " << cert.kernel.kernel_dim_estimate
     << "  " << mark(cert.kernel.kernel_dim_estimate == 1) << "\n";
  os << "  null vectors strictly positive: right "
     << mark(cert.right_positive) << ", left " << mark(cert.left_positive)
     << " (min component " << cert.kernel.min_component << ")\n";
  os << "  transversality <h, xi> = " << cert.transversality << "  (tol "
     << cert.tol_trans << ")  "
     << mark(std::abs(cert.transversality) > cert.tol_trans) << "\n";
  os << "  verdict: " << verdict_name(cert.verdict) << "\n";
  if (!cert.note.empty()) os << "  note: " << cert.note << "\n";
  return os.str();
}

}  // namespace foldfinder
