#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foldfinder/certify.hpp"
#include "foldfinder/continuation.hpp"
#include "foldfinder/solver.hpp"

namespace foldfinder {

// JSON/CSV builders for the CLI artifacts. Every JSON document carries
// schema_version and tool_version; none of them contains timestamps (those
// live only in the run manifest's metadata), so a fixed seed reproduces the
// bytes exactly.

std::string strategy_to_name(Strategy s);
Strategy strategy_from_name(const std::string& name);  // throws Error
std::string termination_to_name(Termination t);

std::string solve_report_json(const std::string& problem_name,
                              const SolveConfig& config,
                              const SolveResult& result);

std::string certificate_json(const FoldCertificate& cert);

std::string probe_json(const ProbeReport& report);

// Branch summary plus the refined fold points (CSV of the full branch is
// emitted separately via branch_to_csv).
std::string branch_summary_json(
    const Branch& branch,
    const std::vector<std::pair<VectorXd, double>>& refined_folds);

struct SweepRow {
  double param_value = 0.0;
  double lambda_star = 0.0;
  double stationarity_residual = 0.0;
  int starts_converged = 0;
};

std::string sweep_csv(const std::string& param_name,
                      const std::vector<SweepRow>& rows);

struct ManifestStage {
  std::string name;
  double wall_seconds = 0.0;
  std::string output_json;  // embedded verbatim when nonempty
  std::string output_path;  // file written by the stage, if any
};

// problem_hash should be hash_hex(config_text); timestamp_utc lands in the
// metadata section so the stage outputs stay reproducible.
std::string manifest_json(const std::string& problem_hash,
                          const std::string& config_text, std::uint64_t seed,
                          const std::vector<ManifestStage>& stages,
                          const std::string& timestamp_utc);

// FNV-1a hex digest used for problem hashes.
std::string hash_hex(const std::string& text);

}  // namespace foldfinder
