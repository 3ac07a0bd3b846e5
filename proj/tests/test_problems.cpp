#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "foldfinder/errors.hpp"
#include "foldfinder/problems.hpp"
#include "foldfinder/solver.hpp"
#include "foldfinder/util.hpp"

using namespace foldfinder;

TEST_SUITE("problems") {

TEST_CASE("linear builder guards its hypotheses") {
  MatrixXd neg(2, 2);
  neg << 1, -0.5, 1, 1;
  CHECK_THROWS_AS(build_linear(neg), NegativeEntry);

  CHECK_THROWS_AS(build_linear(MatrixXd::Identity(3, 3)), NotIrreducible);

  MatrixXd ok(2, 2);
  ok << 2, 1, 1, 2;
  ParametricSystem sys = build_linear(ok);
  CHECK(sys.n == 2);
  CHECK(sys.structural_r);
  VectorXd x(2);
  x << 1.0, 2.0;
  CHECK((sys.eval_g(x) - ok * x).norm() == 0.0);
  CHECK((sys.eval_h(x) - x).norm() == 0.0);
  CHECK((sys.eval_jac_g(x) - ok).norm() == 0.0);

  // Custom box must be respected.
  VectorXd lo = VectorXd::Constant(2, 0.5), hi = VectorXd::Constant(2, 2.0);
  ParametricSystem boxed = build_linear(ok, {{lo, hi}});
  auto [blo, bhi] = boxed.sampling_bounds();
  CHECK((blo - lo).norm() == 0.0);
  CHECK((bhi - hi).norm() == 0.0);
}

TEST_CASE("power-flow builder") {
  CHECK_THROWS_AS(build_power_flow(0.0, 1.0), NonpositiveParameter);
  CHECK_THROWS_AS(build_power_flow(1.0, -2.0), NonpositiveParameter);

  ParametricSystem sys = build_power_flow(1.0, 1.0);
  VectorXd x(2);
  x << -0.3, 0.8;
  VectorXd g = sys.eval_g(x);
  CHECK(g[0] == doctest::Approx(-0.8 * std::sin(-0.3)));
  CHECK(g[1] == doctest::Approx(0.8 * std::cos(-0.3) - 0.64));
  VectorXd h = sys.eval_h(x);
  CHECK(h[0] == doctest::Approx(1.0));
  CHECK(h[1] == doctest::Approx(1.0));
  CHECK(sys.seed_point.has_value());
  CHECK(sys.domain.contains(*sys.seed_point));
  auto [lo, hi] = sys.sampling_bounds();
  CHECK(sys.domain.contains(lo));
  CHECK(sys.domain.contains(hi));
  // Off-diagonals -sin(theta) and -v*sin(theta) share a sign at every point
  // of Q, so the builder can vouch for the sign condition structurally.
  CHECK(sys.structural_r);
  CHECK_FALSE(sys.structural_r_note.empty());

  // Scaling both loads by c divides the maximal lambda by c.
  SolveConfig cfg;
  cfg.seed = 21;
  double base = solve_maxmin(sys, cfg).lambda_star;
  double scaled = solve_maxmin(build_power_flow(2.0, 2.0), cfg).lambda_star;
  CHECK(scaled == doctest::Approx(base / 2.0).epsilon(1e-8));
}

TEST_CASE("mesh builders assemble the expected stencil") {
  const int n = 4;
  const double L = 1.0;
  const double tau = L / (n + 1);
  ParametricSystem sys = build_bratu_fd(n, L);
  CHECK(sys.n == n);
  CHECK(sys.structural_r);
  CHECK_FALSE(sys.structural_r_note.empty());

  VectorXd u(n);
  u << 0.1, 0.4, 0.3, 0.2;
  // g = tridiag(-1, 2, -1)/tau^2 applied to u.
  VectorXd g = sys.eval_g(u);
  double c = 1.0 / (tau * tau);
  CHECK(g[0] == doctest::Approx(c * (2 * 0.1 - 0.4)));
  CHECK(g[1] == doctest::Approx(c * (-0.1 + 2 * 0.4 - 0.3)));
  CHECK(g[3] == doctest::Approx(c * (-0.3 + 2 * 0.2)));
  // h = e^u, Jacobian diag(e^u).
  CHECK((sys.eval_h(u) - u.array().exp().matrix()).norm() <= 1e-15);
  MatrixXd Jh = sys.eval_jac_h(u);
  CHECK((Jh - MatrixXd(u.array().exp().matrix().asDiagonal())).norm() <= 1e-15);
  MatrixXd Jg = sys.eval_jac_g(u);
  CHECK(Jg(0, 0) == doctest::Approx(2 * c));
  CHECK(Jg(0, 1) == doctest::Approx(-c));
  CHECK(Jg(2, 0) == 0.0);

  CHECK_THROWS_AS(build_bratu_fd(0, 1.0), NonpositiveParameter);
  CHECK_THROWS_AS(build_bratu_fd(5, -1.0), NonpositiveParameter);
}

TEST_CASE("concave-convex builder validates exponents") {
  CHECK_THROWS_AS(build_convex_concave_fd(3, 1.0, 1.5, 2.0), BadExponent);
  CHECK_THROWS_AS(build_convex_concave_fd(3, 1.0, 0.0, 2.0), BadExponent);
  CHECK_THROWS_AS(build_convex_concave_fd(3, 1.0, 0.5, 0.9), BadExponent);

  ParametricSystem sys = build_convex_concave_fd(2, 1.0, 0.5, 2.0);
  VectorXd u(2);
  u << 0.5, 0.25;
  const double c = 9.0;  // 1/tau^2 for n = 2, L = 1
  VectorXd g = sys.eval_g(u);
  // g_i = (Laplacian u)_i - u_i^2.
  CHECK(g[0] == doctest::Approx(c * (2 * 0.5 - 0.25) - 0.25));
  CHECK(g[1] == doctest::Approx(c * (-0.5 + 2 * 0.25) - 0.0625));
  VectorXd h = sys.eval_h(u);
  CHECK(h[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(h[1] == doctest::Approx(0.5));

  // An expression p(t) = t^2 reproduces the built-in gamma = 2 exactly.
  ParametricSystem expr = build_convex_concave_fd(2, 1.0, 0.5, "x1^2");
  CHECK((expr.eval_g(u) - g).norm() <= 1e-12);
  CHECK((expr.eval_jac_g(u) - sys.eval_jac_g(u)).norm() <= 1e-9);
}

TEST_CASE("spec round-trips for every kind") {
  SUBCASE("linear") {
    ParametricSystem sys = parse_problem(
        "kind = \"linear\"\n"
        "name = \"pair\"\n"
        "matrix = [[0, 2], [3, 0]]\n");
    CHECK(sys.name == "pair");
    CHECK(sys.n == 2);
    VectorXd x(2);
    x << 1, 1;
    CHECK(sys.eval_g(x)[0] == doctest::Approx(2.0));
    CHECK(sys.eval_g(x)[1] == doctest::Approx(3.0));
  }
  SUBCASE("power-flow with overrides") {
    ParametricSystem sys = parse_problem(
        "kind = \"power-flow\"\n"
        "p = 2.0\n"
        "q_param = 0.5\n"
        "sampling_box = [[-1.0, 0.2], [1.0, 1.5]]\n"
        "seed_point = [-0.1, 0.9]\n");
    VectorXd x(2);
    x << -0.1, 0.9;
    CHECK(sys.eval_h(x)[0] == doctest::Approx(2.0));
    CHECK(sys.eval_h(x)[1] == doctest::Approx(0.5));
    auto [lo, hi] = sys.sampling_bounds();
    CHECK(lo[0] == doctest::Approx(-1.0));
    CHECK(hi[1] == doctest::Approx(1.5));
    CHECK((*sys.seed_point - x).norm() == 0.0);
  }
  SUBCASE("bratu mesh") {
    ParametricSystem sys = parse_problem(
        "kind = \"bratu-fd\"\n"
        "n = 9\n"
        "L = 1.0\n");
    CHECK(sys.n == 9);
    CHECK(sys.structural_r);
  }
  SUBCASE("concave-convex with expression term") {
    ParametricSystem a = parse_problem(
        "kind = \"convex-concave-fd\"\n"
        "n = 3\nL = 1.0\nq = 0.5\ngamma = 2.0\n");
    ParametricSystem b = parse_problem(
        "kind = \"convex-concave-fd\"\n"
        "n = 3\nL = 1.0\nq = 0.5\np = \"x1^2\"\n");
    VectorXd u = VectorXd::Constant(3, 0.4);
    CHECK((a.eval_g(u) - b.eval_g(u)).norm() <= 1e-12);
  }
  SUBCASE("custom expressions") {
    ParametricSystem sys = parse_problem(
        "kind = \"custom\"\n"
        "n = 1\n"
        "expressions.g = [\"8*x1\"]\n"
        "expressions.h = [\"exp(x1)\"]\n"
        "domain.lower = [0.0]\n"
        "domain.upper = [inf]\n"
        "sampling_box = [[0.2], [4.0]]\n");
    CHECK(sys.n == 1);
    VectorXd u(1);
    u << 1.0;
    CHECK(sys.eval_g(u)[0] == doctest::Approx(8.0));
    CHECK(sys.eval_h(u)[0] == doctest::Approx(std::exp(1.0)));
    // Expression-backed Jacobians are symbolic, not finite differences.
    CHECK(sys.eval_jac_g(u)(0, 0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK_FALSE(sys.structural_r);
  }
}

TEST_CASE("spec parsing rejects malformed tables") {
  CHECK_THROWS_AS(parse_problem("kind = \"no-such-kind\"\nn = 3\n"), Error);
  CHECK_THROWS_AS(parse_problem("n = 3\n"), Error);  // kind missing
  // Mismatched custom expression counts.
  CHECK_THROWS_AS(parse_problem("kind = \"custom\"\n"
                                "n = 2\n"
                                "expressions.g = [\"x1\", \"x2\"]\n"
                                "expressions.h = [\"1\"]\n"),
                  DimensionMismatch);
  // Domain override with the wrong dimension.
  CHECK_THROWS_AS(parse_problem("kind = \"bratu-fd\"\n"
                                "n = 3\n"
                                "domain.lower = [0.0, 0.0]\n"),
                  DimensionMismatch);
}

TEST_CASE("builders ship usable sampling data") {
  std::vector<ParametricSystem> systems;
  MatrixXd A(2, 2);
  A << 2, 1, 1, 2;
  systems.push_back(build_linear(A));
  systems.push_back(build_power_flow(1.0, 1.0));
  systems.push_back(build_bratu_fd(7, 1.0));
  systems.push_back(build_convex_concave_fd(4, 1.0, 0.5, 2.0));

  for (const auto& sys : systems) {
    CAPTURE(sys.name);
    auto [lo, hi] = sys.sampling_bounds();
    REQUIRE(lo.size() == sys.n);
    REQUIRE(hi.size() == sys.n);
    CHECK((hi - lo).minCoeff() > 0.0);
    foldfinder::Rng rng(9);
    for (int k = 0; k < 20; ++k) {
      VectorXd x = rng.point(lo, hi);
      CHECK(sys.domain.contains(x));
      VectorXd h = sys.eval_h(x);
      CHECK(h.minCoeff() >= 0.0);
      CHECK(h.maxCoeff() > 0.0);
    }
    if (sys.seed_point) CHECK(sys.domain.contains(*sys.seed_point));
    CHECK_FALSE(sys.name.empty());
  }
}

}  // TEST_SUITE
