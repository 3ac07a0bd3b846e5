// foldfinder: find and certify maximal fold (saddle-node) bifurcations of
// parametric systems g(x) = lambda * h(x).
//
// Exit codes: 0 ok, 1 certification-negative, 2 usage or parse error,
// 3 numerical failure.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "foldfinder/certify.hpp"
#include "foldfinder/continuation.hpp"
#include "foldfinder/errors.hpp"
#include "foldfinder/problems.hpp"
#include "foldfinder/report.hpp"
#include "foldfinder/solver.hpp"
#include "foldfinder/version.hpp"

namespace ff = foldfinder;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotCertified = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Timer {
  std::chrono::steady_clock::time_point begin =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         begin)
        .count();
  }
};

// Anything that fails while reading inputs (config text, expressions,
// builder arguments, solve outputs) is a usage error (exit 2); failures
// inside the numerics are exit 3. This wrapper marks the former.
struct UsageError : ff::Error {
  using ff::Error::Error;
};

template <class Fn>
auto as_usage(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ff::Error& e) {
    throw UsageError(e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ff::Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ff::Error("cannot write file: " + path);
  out << text;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    x[static_cast<Eigen::Index>(i)] = v[i];
  return x;
}

// Shared state assembled from flags; each subcommand fills what it uses.
struct Options {
  std::string problem_path;
  int threads = 0;
  std::string manifest_path;

  std::string strategy = "epigraph-slp";
  int starts = 8;
  std::uint64_t seed = 0;
  int max_iters = 500;
  std::vector<int> resolution;
  std::string out;

  std::vector<double> x;
  double lambda = 0.0;
  bool lambda_set = false;
  std::string from;
  int probe_starts = 200;

  double step = 0.01;
  int max_points = 2000;
  int direction = +1;
  std::string summary_out;

  std::string param;
  std::vector<double> values;
};

struct LoadedProblem {
  std::string text;
  ff::ProblemSpec spec;
  ff::ParametricSystem system;
};

LoadedProblem load_problem(const std::string& path) {
  return as_usage([&] {
    LoadedProblem lp;
    lp.text = read_file(path);
    lp.spec = ff::parse_problem_spec(ff::Config::parse(lp.text));
    lp.system = ff::build_problem(lp.spec);
    return lp;
  });
}

void maybe_write_manifest(const Options& opt, const LoadedProblem& lp,
                          const std::vector<ff::ManifestStage>& stages) {
  if (opt.manifest_path.empty()) return;
  write_file(opt.manifest_path,
             ff::manifest_json(ff::hash_hex(lp.text), lp.text, opt.seed,
                               stages, utc_timestamp()));
}

ff::SolveConfig make_solve_config(const Options& opt) {
  return as_usage([&] {
    ff::SolveConfig config;
    config.strategy = ff::strategy_from_name(opt.strategy);
    config.multistart = opt.starts;
    config.seed = opt.seed;
    config.max_iters = opt.max_iters;
    config.grid_resolution = opt.resolution;
    config.threads = opt.threads;
    config.validate();
    return config;
  });
}

std::pair<Eigen::VectorXd, double> point_from_solve_output(
    const std::string& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  if (!j.contains("x_star") || !j.contains("lambda_star"))
    throw UsageError("not a solve output (missing x_star/lambda_star): " +
                     path);
  const std::vector<double> x = j.at("x_star").get<std::vector<double>>();
  return {to_eigen(x), j.at("lambda_star").get<double>()};
}

int run_solve(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem_path);
  ff::SolveConfig config = make_solve_config(opt);
  Timer timer;
  ff::SolveResult result = ff::solve_maxmin(lp.system, config);
  const double secs = timer.seconds();

  const std::string json =
      ff::solve_report_json(lp.system.name, config, result);
  if (opt.out.empty()) std::cout << json;
  else write_file(opt.out, json);

  std::cerr << "lambda_star = " << std::setprecision(15) << result.lambda_star
            << "  (stationarity " << result.stationarity_residual << ", "
            << result.starts_converged << "/" << config.multistart
            << " starts converged, " << std::setprecision(3) << secs
            << " s)\n";
  if (result.unbounded_suspected)
    std::cerr << "warning: the functional looks unbounded along the best "
                 "ascent path\n";

  maybe_write_manifest(opt, lp, {{"solve", secs, json, opt.out}});
  return kExitOk;
}

int run_certify(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem_path);

  Eigen::VectorXd x;
  double lambda = 0.0;
  if (!opt.from.empty()) {
    std::tie(x, lambda) = point_from_solve_output(opt.from);
  } else {
    if (opt.x.empty() || !opt.lambda_set)
      throw CLI::ValidationError(
          "certify", "provide either --from <solve.json> or --x and --lambda");
    x = to_eigen(opt.x);
    lambda = opt.lambda;
  }

  Timer timer;
  ff::FoldCertificate cert = ff::certify_saddle_node(lp.system, x, lambda);
  const double secs = timer.seconds();

  std::cout << ff::certificate_to_text(cert);
  const std::string json = ff::certificate_json(cert);
  if (!opt.out.empty()) write_file(opt.out, json);

  maybe_write_manifest(opt, lp, {{"certify", secs, json, opt.out}});
  return cert.certified() ? kExitOk : kExitNotCertified;
}

int run_trace(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem_path);

  Eigen::VectorXd x0;
  double lambda0 = 0.0;
  if (!opt.from.empty()) {
    std::tie(x0, lambda0) = point_from_solve_output(opt.from);
  } else {
    if (opt.x.empty() || !opt.lambda_set)
      throw CLI::ValidationError(
          "trace", "provide either --from <solve.json> or --x and --lambda");
    x0 = to_eigen(opt.x);
    lambda0 = opt.lambda;
  }

  ff::TraceConfig config;
  config.step = opt.step;
  config.max_points = opt.max_points;
  config.direction = opt.direction;

  Timer timer;
  // Rough seeds are first pulled onto the branch at fixed lambda; if that
  // fails (e.g. the seed sits at a fold), trace_branch's own polish applies.
  const double r0 =
      lp.system.eval_f(x0, lambda0).lpNorm<Eigen::Infinity>();
  if (r0 > 1e3 * config.corrector_tol)
    std::tie(x0, lambda0) = ff::branch_start(lp.system, x0, lambda0);
  ff::Branch branch = ff::trace_branch(lp.system, x0, lambda0, config);
  std::vector<std::pair<Eigen::VectorXd, double>> folds;
  if (!branch.fold_indices.empty() && branch.points.size() >= 3)
    folds = ff::fold_from_branch(lp.system, branch);
  const double secs = timer.seconds();

  const std::string csv = ff::branch_to_csv(branch);
  if (opt.out.empty()) std::cout << csv;
  else write_file(opt.out, csv);

  const std::string summary = ff::branch_summary_json(branch, folds);
  if (!opt.summary_out.empty()) write_file(opt.summary_out, summary);

  std::cerr << branch.points.size() << " branch points, "
            << folds.size() << " fold(s)";
  for (const auto& [fx, fl] : folds)
    std::cerr << "  lambda = " << std::setprecision(15) << fl;
  std::cerr << "\n";

  maybe_write_manifest(opt, lp, {{"trace", secs, summary, opt.out}});
  return kExitOk;
}

int run_probe(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem_path);
  if (!opt.lambda_set)
    throw CLI::ValidationError("probe", "--lambda is required");

  Timer timer;
  const std::vector<Eigen::VectorXd> starts =
      ff::probe_starts(lp.system, opt.probe_starts, opt.seed);
  ff::ProbeReport report = ff::probe_no_solutions_above(
      lp.system, opt.lambda, starts, opt.threads);
  const double secs = timer.seconds();

  const std::string json = ff::probe_json(report);
  if (opt.out.empty()) std::cout << json;
  else write_file(opt.out, json);

  std::cerr << report.converged_in_Q.size() << " root(s) in Q at lambda = "
            << std::setprecision(15) << report.lambda << " from "
            << report.attempts << " starts\n";

  maybe_write_manifest(opt, lp, {{"probe", secs, json, opt.out}});
  return kExitOk;
}

int run_sweep(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem_path);
  if (opt.values.empty())
    throw CLI::ValidationError("sweep", "--values is required");

  std::vector<ff::SweepRow> rows;
  std::vector<ff::ManifestStage> stages;
  for (double value : opt.values) {
    ff::ProblemSpec spec = lp.spec;
    if (opt.param == "n") spec.n = static_cast<int>(std::lround(value));
    else if (opt.param == "L") spec.L = value;
    else if (opt.param == "q") spec.q = value;
    else if (opt.param == "gamma") spec.gamma = value;
    else if (opt.param == "p") spec.p = value;
    else if (opt.param == "q_param") spec.q_param = value;
    else
      throw CLI::ValidationError(
          "sweep", "--param must be one of n, L, q, gamma, p, q_param");
    if (opt.param == "n") {
      // Mesh-dependent defaults (seed point, box) must be rebuilt, so drop
      // any overrides copied from the base problem.
      spec.seed_point.reset();
      spec.sampling_box.reset();
    }

    ff::ParametricSystem system = as_usage([&] { return ff::build_problem(spec); });
    ff::SolveConfig config = make_solve_config(opt);
    Timer timer;
    ff::SolveResult result = ff::solve_maxmin(system, config);
    const double secs = timer.seconds();

    rows.push_back({value, result.lambda_star, result.stationarity_residual,
                    result.starts_converged});
    std::ostringstream name;
    name << "solve " << opt.param << "=" << value;
    stages.push_back({name.str(), secs, "", ""});
    std::cerr << opt.param << " = " << value << "  ->  lambda_star = "
              << std::setprecision(15) << result.lambda_star << "\n";
  }

  const std::string csv = ff::sweep_csv(opt.param, rows);
  if (opt.out.empty()) std::cout << csv;
  else write_file(opt.out, csv);

  maybe_write_manifest(opt, lp, stages);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "foldfinder: maximal saddle-node bifurcations of g(x) = lambda*h(x)"};
  app.set_version_flag("--version", std::string(ff::kVersionString));
  app.require_subcommand(1);

  Options opt;
  app.add_option("--threads", opt.threads,
                 "worker count (0 = FOLDFINDER_THREADS or logical cores)");
  app.add_option("--manifest", opt.manifest_path,
                 "write a run manifest (inputs, outputs, timings) here");

  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("problem", opt.problem_path, "problem file")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_solve_flags = [&](CLI::App* sub) {
    sub->add_option("--strategy", opt.strategy,
                    "epigraph-slp | smoothed | subgradient | grid-oracle");
    sub->add_option("--starts", opt.starts, "multistart count");
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("--max-iters", opt.max_iters, "iteration cap per start");
    sub->add_option("--resolution", opt.resolution,
                    "grid-oracle points per axis (single value replicates)");
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "maximize lambda(x) = min_i g_i(x)/h_i(x) over the domain");
  add_problem(solve);
  add_solve_flags(solve);
  solve->add_option("--out", opt.out, "write the solve report JSON here");

  CLI::App* certify = app.add_subcommand(
      "certify", "run the fold sufficiency checklist at a candidate point");
  add_problem(certify);
  certify->add_option("--x", opt.x, "candidate point (comma separated)")
      ->delimiter(',');
  certify->add_option("--lambda", opt.lambda, "candidate lambda")
      ->each([&](const std::string&) { opt.lambda_set = true; });
  certify->add_option("--from", opt.from, "take the point from a solve JSON")
      ->check(CLI::ExistingFile);
  certify->add_option("--out", opt.out, "write the certificate JSON here");

  CLI::App* trace = app.add_subcommand(
      "trace", "pseudo-arclength branch trace through folds");
  add_problem(trace);
  trace->add_option("--x", opt.x, "branch seed point (comma separated)")
      ->delimiter(',');
  trace->add_option("--lambda", opt.lambda, "branch seed lambda")
      ->each([&](const std::string&) { opt.lambda_set = true; });
  trace->add_option("--from", opt.from, "take the seed from a solve JSON")
      ->check(CLI::ExistingFile);
  trace->add_option("--step", opt.step, "target arclength step");
  trace->add_option("--max-points", opt.max_points, "branch point cap");
  trace->add_option("--direction", opt.direction,
                    "initial direction of the lambda slope (+1 or -1)");
  trace->add_option("--out", opt.out, "write the branch CSV here");
  trace->add_option("--summary", opt.summary_out,
                    "write the branch summary JSON here");

  CLI::App* probe = app.add_subcommand(
      "probe", "multistart Newton search for roots at a fixed lambda");
  add_problem(probe);
  probe->add_option("--lambda", opt.lambda, "probe level")
      ->each([&](const std::string&) { opt.lambda_set = true; });
  probe->add_option("--starts", opt.probe_starts, "number of Newton starts");
  probe->add_option("--seed", opt.seed, "RNG seed");
  probe->add_option("--out", opt.out, "write the probe report JSON here");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "re-solve while sweeping one problem parameter");
  add_problem(sweep);
  add_solve_flags(sweep);
  sweep->add_option("--param", opt.param, "n | L | q | gamma | p | q_param")
      ->required();
  sweep->add_option("--values", opt.values, "parameter values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", opt.out, "write the sweep CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(opt);
    if (certify->parsed()) return run_certify(opt);
    if (trace->parsed()) return run_trace(opt);
    if (probe->parsed()) return run_probe(opt);
    if (sweep->parsed()) return run_sweep(opt);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ff::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ff::UnknownIdentifier& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ff::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ff::DimensionTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ff::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
