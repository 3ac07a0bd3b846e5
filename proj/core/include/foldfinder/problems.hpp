#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "foldfinder/config.hpp"
#include "foldfinder/system.hpp"

namespace foldfinder {

// ---- Built-in problem builders ------------------------------------------
//
// Each returns a fully wired ParametricSystem: analytic Jacobians, domain,
// a finite multistart sampling box, a branch-tracing seed, and (when the
// construction guarantees it) the structural sign/irreducibility flag.

// g(x) = A*x, h(x) = x on the open positive orthant; lambda* is the Perron
// root of A. A must be entrywise nonnegative and irreducible. The optional
// box intersects the orthant (and doubles as the sampling box).
ParametricSystem build_linear(
    const MatrixXd& A,
    std::optional<std::pair<VectorXd, VectorXd>> box = std::nullopt);

// Two-bus load flow in x = (theta, v):
//   g = (-v*sin(theta), v*cos(theta) - v^2),  h = (p, q)  (constant loads),
// on Q = (-pi/2, pi/2) x (0, inf). lambda scales both loads together; the
// maximal lambda is the nose of the load-flow branch.
ParametricSystem build_power_flow(double p, double q);

// Uniform-mesh central-difference discretization of
//   -u'' - p(u) = lambda * u^q,  u(0) = u(L) = 0,
// with n interior nodes, tau = L/(n+1), concave exponent q in (0,1), and the
// built-in superlinear term p(t) = t^gamma (gamma > 1).
ParametricSystem build_convex_concave_fd(int n, double L, double q,
                                         double gamma);
// Same, with p supplied as an expression in one variable (x1). Growth
// conditions (superlinear at infinity relative to t^q, sublinear at 0) are
// spot-checked numerically and warn on stderr instead of failing.
ParametricSystem build_convex_concave_fd(int n, double L, double q,
                                         const std::string& p_expr);

// Uniform-mesh discretization of the Bratu–Gelfand problem
//   -u'' = lambda * e^u,  u(0) = u(L) = 0,
// with n interior nodes and tau = L/(n+1).
ParametricSystem build_bratu_fd(int n, double L);

// ---- Config-file front end ----------------------------------------------

// Image of one problem table from a config file; see README for the format.
struct ProblemSpec {
  std::string kind;  // linear | power-flow | convex-concave-fd | bratu-fd | custom
  std::string name;

  // linear
  MatrixXd matrix;

  // power-flow
  double p = 1.0;
  double q_param = 1.0;

  // discretizations
  int n = 0;
  double L = 1.0;
  double q = 0.5;
  double gamma = 2.0;
  std::string p_expr;  // overrides gamma when nonempty

  // custom
  std::vector<std::string> g_exprs;
  std::vector<std::string> h_exprs;

  // optional overrides for any kind
  std::optional<VectorXd> domain_lower;
  std::optional<VectorXd> domain_upper;
  std::optional<std::vector<bool>> domain_strict;
  std::optional<std::pair<VectorXd, VectorXd>> sampling_box;
  std::optional<VectorXd> seed_point;
};

// Reads the single problem table of a parsed config (top-level keys or one
// `[section]`). Throws Error/ParseError on malformed input.
ProblemSpec parse_problem_spec(const Config& config);

// Instantiates the spec via the matching builder; custom specs get
// expression-backed evaluators with AST-differentiated Jacobians and carry
// no structural flag.
ParametricSystem build_problem(const ProblemSpec& spec);

// Convenience: config text -> ProblemSpec -> ParametricSystem.
ParametricSystem parse_problem(const std::string& config_text);

}  // namespace foldfinder
