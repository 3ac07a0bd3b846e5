#include <benchmark/benchmark.h>

#include "foldfinder/continuation.hpp"
#include "foldfinder/hull.hpp"
#include "foldfinder/matrix_analysis.hpp"
#include "foldfinder/problems.hpp"
#include "foldfinder/ratio.hpp"
#include "foldfinder/solver.hpp"
#include "foldfinder/util.hpp"

namespace {

using namespace foldfinder;

void BM_RatioProfileBratu99(benchmark::State& state) {
  ParametricSystem sys = build_bratu_fd(99, 1.0);
  VectorXd x = VectorXd::Constant(99, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ratio_profile(sys, x).lambda_of_x);
  }
}
BENCHMARK(BM_RatioProfileBratu99);

void BM_PerronPair(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(7);
  MatrixXd A = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rng.uniform() < 0.3) A(i, j) = rng.uniform();
  for (int i = 0; i < n; ++i) A(i, (i + 1) % n) += 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        perron_pair(A, PerronMode::kDominantStructure).eigenvalue);
  }
}
BENCHMARK(BM_PerronPair)->Arg(8)->Arg(32)->Arg(128);

void BM_SolveLoadFlow(benchmark::State& state) {
  ParametricSystem sys = build_power_flow(1.0, 1.0);
  SolveConfig config;
  config.seed = 11;
  config.multistart = 4;
  config.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_maxmin(sys, config).lambda_star);
  }
}
BENCHMARK(BM_SolveLoadFlow);

void BM_SolveBratu(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ParametricSystem sys = build_bratu_fd(n, 1.0);
  SolveConfig config;
  config.seed = 12;
  config.multistart = 2;
  config.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_maxmin(sys, config).lambda_star);
  }
}
BENCHMARK(BM_SolveBratu)->Arg(9)->Arg(39);

void BM_MinNormInHull(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(13);
  MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_norm_in_hull(G).norm);
  }
}
BENCHMARK(BM_MinNormInHull)->Arg(4)->Arg(16)->Arg(64);

void BM_TraceBranchSegment(benchmark::State& state) {
  ParametricSystem sys = build_bratu_fd(19, 1.0);
  VectorXd seed = VectorXd::Constant(19, 0.3);
  auto [x0, l0] = branch_start(sys, seed, 2.0);
  TraceConfig config;
  config.max_points = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_branch(sys, x0, l0, config).points.size());
  }
}
BENCHMARK(BM_TraceBranchSegment);

}  // namespace

BENCHMARK_MAIN();
