#include <doctest.h>

#include <cmath>
#include <tuple>

#include "foldfinder/errors.hpp"
#include "foldfinder/matrix_analysis.hpp"
#include "foldfinder/problems.hpp"
#include "foldfinder/util.hpp"
#include "support/oracles.hpp"

using namespace foldfinder;

TEST_SUITE("matrix-analysis") {

TEST_CASE("off-diagonal sign classification") {
  MatrixXd pos(2, 2), neg(2, 2), mixed(3, 3), zero(2, 2);
  pos << 5, 1, 2, -7;    // diagonal is ignored
  neg << 5, -1, -2, 7;
  mixed.setZero();
  mixed(0, 1) = 1;
  mixed(1, 2) = -1;
  zero << 3, 0, 0, -4;

  RCheckReport rp = check_off_diagonal_sign(pos);
  CHECK(rp.sign_constant);
  CHECK(rp.sign == OffDiagSign::kNonnegative);

  RCheckReport rn = check_off_diagonal_sign(neg);
  CHECK(rn.sign_constant);
  CHECK(rn.sign == OffDiagSign::kNonpositive);

  RCheckReport rz = check_off_diagonal_sign(zero);
  CHECK(rz.sign_constant);
  CHECK(rz.sign == OffDiagSign::kBothPossibleZero);

  RCheckReport rm = check_off_diagonal_sign(mixed);
  CHECK_FALSE(rm.sign_constant);
  // Invariant: the violation list names at least one entry of each sign.
  bool has_pos = false, has_neg = false;
  for (const auto& [i, j, v] : rm.violating_entries) {
    CHECK(i != j);
    has_pos = has_pos || v > 0;
    has_neg = has_neg || v < 0;
  }
  CHECK(has_pos);
  CHECK(has_neg);
}

TEST_CASE("irreducibility equals strong connectivity") {
  MatrixXd I = MatrixXd::Identity(3, 3);
  RCheckReport r1 = check_irreducible(I);
  CHECK_FALSE(r1.irreducible);
  CHECK(r1.scc_count == 3);

  MatrixXd cycle = MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) cycle(i, (i + 1) % 4) = 1.0;
  RCheckReport r2 = check_irreducible(cycle);
  CHECK(r2.irreducible);
  CHECK(r2.scc_count == 1);

  // One-way coupling: two components.
  MatrixXd tri(2, 2);
  tri << 1, 1, 0, 1;
  RCheckReport r3 = check_irreducible(tri);
  CHECK_FALSE(r3.irreducible);
  CHECK(r3.scc_count == 2);

  MatrixXd one(1, 1);
  one << 0.0;
  CHECK(check_irreducible(one).irreducible);  // by convention
}

TEST_CASE("dominant mode matches the dense eigensolver") {
  foldfinder::Rng rng(314);
  for (int k = 0; k < 30; ++k) {
    int n = 2 + static_cast<int>(rng.raw() % 7);
    MatrixXd A = oracles::random_irreducible_nonneg(rng, n);
    oracles::EigenPair ref = oracles::dense_perron(A);

    PerronCertificate cert = perron_pair(A, PerronMode::kDominantStructure);
    CHECK(cert.eigenvalue == doctest::Approx(ref.rho).epsilon(1e-9));
    CHECK(oracles::angle_between(cert.right_vec, ref.right) < 1e-7);
    CHECK(oracles::angle_between(cert.left_vec, ref.left) < 1e-7);
    CHECK(cert.right_vec.minCoeff() > 0.0);
    CHECK(cert.left_vec.minCoeff() > 0.0);
    CHECK(cert.iterations > 0);
  }
}

TEST_CASE("quotient interval brackets the shifted root at every step") {
  foldfinder::Rng rng(315);
  for (int k = 0; k < 10; ++k) {
    int n = 2 + static_cast<int>(rng.raw() % 6);
    MatrixXd A = oracles::random_irreducible_nonneg(rng, n);
    double rho = oracles::dense_perron(A).rho;
    // The iteration runs on B = A + sigma*I, whose dominant root is
    // rho(A) + sigma; the per-step quotient interval must bracket it.
    double sigma = A.cwiseAbs().rowwise().sum().maxCoeff();
    double target = rho + sigma;

    PerronCertificate cert = perron_pair(A, PerronMode::kDominantStructure);
    REQUIRE(!cert.cw_bounds.empty());
    const double slack = 1e-9 * (1.0 + target);
    for (const auto& [lo, hi] : cert.cw_bounds) {
      CHECK(lo <= target + slack);
      CHECK(hi >= target - slack);
      CHECK(lo <= hi + slack);
    }
  }
}

TEST_CASE("nonpositive off-diagonals are handled by flipping") {
  // Discrete 1-D Laplacian: off-diagonals are negative; the smallest
  // eigenvalue has the positive eigenvector sin(k*pi*tau).
  const int n = 6;
  MatrixXd A = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 2.0;
    if (i > 0) A(i, i - 1) = -1.0;
    if (i + 1 < n) A(i, i + 1) = -1.0;
  }
  PerronCertificate cert = perron_pair(A, PerronMode::kDominantStructure);
  const double pi = 3.14159265358979323846;
  double expected = 2.0 - 2.0 * std::cos(pi / (n + 1));
  CHECK(cert.eigenvalue == doctest::Approx(expected).epsilon(1e-9));
  CHECK(cert.right_vec.minCoeff() > 0.0);

  MatrixXd mixed(2, 2);
  mixed << 0, 1, -1, 0;
  CHECK_THROWS_AS(perron_pair(mixed, PerronMode::kDominantStructure),
                  NotSignConstant);
}

TEST_CASE("kernel mode sizes the null space") {
  // Rank-1 3x3: kernel dimension 2.
  VectorXd u(3);
  u << 1, 2, 3;
  MatrixXd rank1 = u * u.transpose();
  CHECK(perron_pair(rank1, PerronMode::kKernel).kernel_dim_estimate == 2);

  // Rank-2 with known positive kernel vector (1, 1, 1).
  MatrixXd A(3, 3);
  A << 1, -1, 0, 0, 1, -1, 2, 1, -3;
  PerronCertificate cert = perron_pair(A, PerronMode::kKernel);
  CHECK(cert.kernel_dim_estimate == 1);
  VectorXd ones = VectorXd::Ones(3).normalized();
  CHECK(oracles::angle_between(cert.right_vec, ones) < 1e-10);
  CHECK(std::abs(cert.eigenvalue) < 1e-12);

  // Nonsingular: empty kernel, but vectors still exposed.
  MatrixXd inv(2, 2);
  inv << 2, 1, 1, 2;
  PerronCertificate full = perron_pair(inv, PerronMode::kKernel);
  CHECK(full.kernel_dim_estimate == 0);
  CHECK(full.right_vec.size() == 2);
}

TEST_CASE("scale hint rescues near-zero fold jacobians") {
  MatrixXd tiny(1, 1);
  tiny << 1.3e-15;
  // Relative to its own largest singular value the matrix has full rank;
  // relative to the operator scale it was assembled from, it is zero.
  CHECK(perron_pair(tiny, PerronMode::kKernel).kernel_dim_estimate == 0);
  CHECK(perron_pair(tiny, PerronMode::kKernel, 8.0).kernel_dim_estimate == 1);
}

TEST_CASE("sampled condition check on a builder system") {
  ParametricSystem bratu = build_bratu_fd(5, 1.0);
  std::vector<std::pair<VectorXd, double>> samples;
  foldfinder::Rng rng(316);
  auto [lo, hi] = bratu.sampling_bounds();
  for (int k = 0; k < 10; ++k) samples.push_back({rng.point(lo, hi), 1.0 + rng.uniform()});

  RConditionReport rep = check_condition_r(bratu, samples);
  CHECK(rep.pass);
  CHECK(rep.structural);
  CHECK(rep.samples_checked == 10);
  CHECK(rep.sign == OffDiagSign::kNonpositive);  // Laplacian off-diagonals

  // A decoupled two-block system fails irreducibility at every point.
  ParametricSystem decoupled;
  decoupled.n = 2;
  decoupled.g = [](const VectorXd& x) {
    VectorXd v(2);
    v << x[0] * x[0], x[1] * x[1];
    return v;
  };
  decoupled.h = [](const VectorXd&) { return VectorXd::Ones(2); };
  decoupled.domain = DomainSpec::positive_orthant(2);
  VectorXd p(2);
  p << 1.0, 1.0;
  RConditionReport bad = check_condition_r(decoupled, {{p, 0.5}});
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.witness_report.irreducible);
  CHECK(bad.witness_x.size() == 2);
}

}  // TEST_SUITE
