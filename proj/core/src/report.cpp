#include "foldfinder/report.hpp"

#include <json.hpp>
#include <sstream>

#include "foldfinder/errors.hpp"
#include "foldfinder/util.hpp"
#include "foldfinder/version.hpp"

namespace foldfinder {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<double> to_std(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

const char* sign_name(OffDiagSign sign) {
  switch (sign) {
    case OffDiagSign::kNonnegative: return "nonnegative";
    case OffDiagSign::kNonpositive: return "nonpositive";
    case OffDiagSign::kBothPossibleZero: return "zero";
  }
  return "zero";
}

ordered_json header() {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kVersionString;
  return j;
}

ordered_json profile_json(const RatioProfile& profile) {
  ordered_json j;
  ordered_json ratios = ordered_json::array();
  for (const auto& r : profile.ratios) {
    if (r) ratios.push_back(*r);
    else ratios.push_back(nullptr);
  }
  j["ratios"] = std::move(ratios);
  j["active"] = profile.active;
  j["full_active"] = profile.full_active;
  return j;
}

}  // namespace

std::string strategy_to_name(Strategy s) {
  switch (s) {
    case Strategy::kEpigraphSlp: return "epigraph-slp";
    case Strategy::kSmoothedAscent: return "smoothed";
    case Strategy::kSubgradient: return "subgradient";
    case Strategy::kGridOracle: return "grid-oracle";
  }
  return "epigraph-slp";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "epigraph-slp") return Strategy::kEpigraphSlp;
  if (name == "smoothed") return Strategy::kSmoothedAscent;
  if (name == "subgradient") return Strategy::kSubgradient;
  if (name == "grid-oracle") return Strategy::kGridOracle;
  throw Error("unknown strategy: " + name +
              " (expected epigraph-slp | smoothed | subgradient | "
              "grid-oracle)");
}

std::string termination_to_name(Termination t) {
  switch (t) {
    case Termination::kStepTol: return "step-tol";
    case Termination::kStationarity: return "stationarity";
    case Termination::kIterationCap: return "iteration-cap";
    case Termination::kInfeasibleStart: return "infeasible-start";
  }
  return "infeasible-start";
}

std::string solve_report_json(const std::string& problem_name,
                              const SolveConfig& config,
                              const SolveResult& result) {
  ordered_json j = header();
  j["problem"] = problem_name;
  j["strategy"] = strategy_to_name(config.strategy);
  j["seed"] = config.seed;
  j["multistart"] = config.multistart;
  j["lambda_star"] = result.lambda_star;
  j["x_star"] = to_std(result.x_star);
  j["stationarity_residual"] = result.stationarity_residual;
  j["starts_converged"] = result.starts_converged;
  j["best_start_index"] = result.best_start_index;
  j["unbounded_suspected"] = result.unbounded_suspected;
  j["profile"] = profile_json(result.profile);

  ordered_json trace = ordered_json::array();
  for (const auto& t : result.trace) {
    ordered_json row;
    row["start_index"] = t.start_index;
    row["lambda0"] = t.lambda0;
    row["lambda_final"] = t.lambda_final;
    row["iterations"] = t.iterations.size();
    row["termination"] = termination_to_name(t.termination);
    row["stationarity_residual"] = t.stationarity_residual;
    row["unbounded_suspected"] = t.unbounded_suspected;
    trace.push_back(std::move(row));
  }
  j["trace"] = std::move(trace);
  return j.dump(2) + "\n";
}

std::string certificate_json(const FoldCertificate& cert) {
  ordered_json j = header();
  j["verdict"] = verdict_name(cert.verdict);
  j["lambda"] = cert.lambda;
  j["x"] = to_std(cert.x);
  j["solution_residual"] = cert.solution_residual;
  j["tol_res"] = cert.tol_res;
  j["active_full"] = cert.active_full;
  j["active_count"] = cert.active_count;

  ordered_json st;
  st["residual"] = cert.stationarity.residual;
  st["tol"] = cert.tol_stationarity;
  st["active"] = cert.stationarity.active;
  st["fw_gap"] = cert.stationarity.fw_gap;
  j["stationarity"] = std::move(st);

  ordered_json rc;
  rc["pass"] = cert.r_check.passes();
  rc["sign_constant"] = cert.r_check.sign_constant;
  rc["sign"] = sign_name(cert.r_check.sign);
  rc["irreducible"] = cert.r_check.irreducible;
  rc["scc_count"] = cert.r_check.scc_count;
  rc["structural"] = cert.structural_r;
  j["condition_r"] = std::move(rc);

  ordered_json kern;
  kern["kernel_dim_estimate"] = cert.kernel.kernel_dim_estimate;
  kern["eigenvalue"] = cert.kernel.eigenvalue;
  kern["min_component"] = cert.kernel.min_component;
  kern["right_vec"] = to_std(cert.kernel.right_vec);
  kern["left_vec"] = to_std(cert.kernel.left_vec);
  j["kernel"] = std::move(kern);

  j["right_positive"] = cert.right_positive;
  j["left_positive"] = cert.left_positive;
  j["transversality"] = cert.transversality;
  j["tol_trans"] = cert.tol_trans;
  j["note"] = cert.note;
  return j.dump(2) + "\n";
}

std::string probe_json(const ProbeReport& report) {
  ordered_json j = header();
  j["lambda"] = report.lambda;
  j["attempts"] = report.attempts;
  j["roots_found"] = report.converged_in_Q.size();
  ordered_json roots = ordered_json::array();
  for (const auto& x : report.converged_in_Q) roots.push_back(to_std(x));
  j["roots"] = std::move(roots);
  j["root_residuals"] = report.root_residuals;
  j["converged_outside"] = report.converged_outside;
  j["max_residual_drop"] = report.max_residual_drop;
  return j.dump(2) + "\n";
}

std::string branch_summary_json(
    const Branch& branch,
    const std::vector<std::pair<VectorXd, double>>& refined_folds) {
  ordered_json j = header();
  j["points"] = branch.points.size();
  const char* reason = "max-points";
  if (branch.stop_reason == Branch::StopReason::kDomainExit)
    reason = "domain-exit";
  else if (branch.stop_reason == Branch::StopReason::kCorrectorDivergence)
    reason = "corrector-divergence";
  j["stop_reason"] = reason;
  if (!branch.points.empty()) {
    j["arclength"] = branch.points.back().s;
    double lo = branch.points.front().lambda, hi = lo;
    for (const auto& p : branch.points) {
      lo = std::min(lo, p.lambda);
      hi = std::max(hi, p.lambda);
    }
    j["lambda_min"] = lo;
    j["lambda_max"] = hi;
  }
  j["fold_indices"] = branch.fold_indices;
  ordered_json folds = ordered_json::array();
  for (const auto& [x, lambda] : refined_folds) {
    ordered_json f;
    f["lambda"] = lambda;
    f["x"] = to_std(x);
    folds.push_back(std::move(f));
  }
  j["folds"] = std::move(folds);
  return j.dump(2) + "\n";
}

std::string sweep_csv(const std::string& param_name,
                      const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << param_name << ",lambda_star,stationarity_residual,starts_converged\n";
  for (const auto& row : rows)
    os << row.param_value << ',' << row.lambda_star << ','
       << row.stationarity_residual << ',' << row.starts_converged << '\n';
  return os.str();
}

std::string manifest_json(const std::string& problem_hash,
                          const std::string& config_text, std::uint64_t seed,
                          const std::vector<ManifestStage>& stages,
                          const std::string& timestamp_utc) {
  ordered_json j = header();
  j["problem_hash"] = problem_hash;
  j["seed"] = seed;
  j["config_text"] = config_text;
  ordered_json meta;
  meta["timestamp_utc"] = timestamp_utc;
  j["metadata"] = std::move(meta);

  ordered_json stage_list = ordered_json::array();
  for (const auto& stage : stages) {
    ordered_json s;
    s["name"] = stage.name;
    s["wall_seconds"] = stage.wall_seconds;
    if (!stage.output_json.empty())
      s["output"] = json::parse(stage.output_json);
    if (!stage.output_path.empty()) s["output_path"] = stage.output_path;
    stage_list.push_back(std::move(s));
  }
  j["stages"] = std::move(stage_list);
  return j.dump(2) + "\n";
}

std::string hash_hex(const std::string& text) { return to_hex(fnv1a(text)); }

}  // namespace foldfinder
