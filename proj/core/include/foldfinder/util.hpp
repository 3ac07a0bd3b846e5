#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace foldfinder {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Deterministic uniform sampler. mt19937_64 has a fixed, portable output
// sequence, and the 53-bit mapping below is fixed too, so a given seed yields
// identical doubles on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform point in the box [lo, hi] componentwise.
  VectorXd point(const VectorXd& lo, const VectorXd& hi) {
    VectorXd x(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) x[i] = uniform(lo[i], hi[i]);
    return x;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Number of workers: explicit argument > FOLDFINDER_THREADS > logical cores.
int resolve_thread_count(int requested = 0);

// Runs body(i) for i in [0, count) over at most `threads` workers. Results
// must be written to pre-sized slots indexed by i so the merge order is
// deterministic regardless of scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

// FNV-1a, used to fingerprint problem files in run manifests.
std::uint64_t fnv1a(const std::string& bytes);

std::string to_hex(std::uint64_t value);

}  // namespace foldfinder
