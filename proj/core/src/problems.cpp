#include "foldfinder/problems.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "foldfinder/errors.hpp"
#include "foldfinder/expression.hpp"
#include "foldfinder/matrix_analysis.hpp"

namespace foldfinder {
namespace {

VectorXd constant_vector(int n, double value) {
  return VectorXd::Constant(n, value);
}

// Shared scaffolding for the 1-D two-point boundary value discretizations:
// tau = L/(n+1) and the constant tridiagonal second-difference matrix
// (2/tau^2 on the diagonal, -1/tau^2 off it).
struct Mesh {
  int n;
  double tau;
  MatrixXd laplacian;
};

Mesh make_mesh(int n, double L) {
  if (n < 1) throw NonpositiveParameter("mesh size must be >= 1");
  if (!(L > 0)) throw NonpositiveParameter("interval length must be positive");
  Mesh mesh;
  mesh.n = n;
  mesh.tau = L / (n + 1);
  const double d = 2.0 / (mesh.tau * mesh.tau);
  const double o = -1.0 / (mesh.tau * mesh.tau);
  mesh.laplacian = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    mesh.laplacian(i, i) = d;
    if (i + 1 < n) {
      mesh.laplacian(i, i + 1) = o;
      mesh.laplacian(i + 1, i) = o;
    }
  }
  return mesh;
}

void clamp_into_box(VectorXd& x, const std::pair<VectorXd, VectorXd>& box) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x[i] = std::min(std::max(x[i], box.first[i]), box.second[i]);
}

}  // namespace

ParametricSystem build_linear(
    const MatrixXd& A, std::optional<std::pair<VectorXd, VectorXd>> box) {
  if (A.rows() != A.cols()) throw Error("matrix must be square");
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(A(i, j) >= 0)) {
        std::ostringstream os;
        os << "matrix entry (" << i << ", " << j << ") = " << A(i, j)
           << " is negative";
        throw NegativeEntry(os.str());
      }
  RCheckReport irr = check_irreducible(A);
  if (!irr.irreducible) {
    std::ostringstream os;
    os << "matrix is reducible (" << irr.scc_count
       << " strongly connected components)";
    throw NotIrreducible(os.str());
  }

  ParametricSystem s;
  s.n = n;
  s.name = "linear";
  MatrixXd Acopy = A;
  s.g = [Acopy](const VectorXd& x) -> VectorXd { return Acopy * x; };
  s.h = [](const VectorXd& x) -> VectorXd { return x; };
  s.jac_g = [Acopy](const VectorXd&) -> MatrixXd { return Acopy; };
  s.jac_h = [n](const VectorXd&) -> MatrixXd {
    return MatrixXd::Identity(n, n);
  };

  s.domain = DomainSpec::positive_orthant(n);
  if (box) {
    if (box->first.size() != n || box->second.size() != n)
      throw DimensionMismatch("box dimension does not match the matrix");
    for (int i = 0; i < n; ++i)
      s.domain.lower[i] = std::max(s.domain.lower[i], box->first[i]);
    s.domain.upper = box->second;
    s.domain.validate();
    s.sampling_box = {s.domain.lower.cwiseMax(constant_vector(n, 1e-8)),
                      s.domain.upper};
  } else {
    s.sampling_box = {constant_vector(n, 0.01), constant_vector(n, 10.0)};
  }

  VectorXd seed = constant_vector(n, 1.0);
  clamp_into_box(seed, *s.sampling_box);
  s.seed_point = seed;

  s.structural_r = true;
  s.structural_r_note =
      "the state Jacobian A - lambda*I has the constant nonnegative "
      "off-diagonal entries of A, whose irreducibility was checked on "
      "construction";
  s.validate();
  return s;
}

ParametricSystem build_power_flow(double p, double q) {
  if (!(p > 0)) throw NonpositiveParameter("active load p must be positive");
  if (!(q > 0)) throw NonpositiveParameter("reactive load q must be positive");

  ParametricSystem s;
  s.n = 2;
  s.name = "power-flow";
  s.g = [](const VectorXd& x) -> VectorXd {
    const double theta = x[0], v = x[1];
    VectorXd out(2);
    out[0] = -v * std::sin(theta);
    out[1] = v * std::cos(theta) - v * v;
    return out;
  };
  s.h = [p, q](const VectorXd&) -> VectorXd {
    VectorXd out(2);
    out[0] = p;
    out[1] = q;
    return out;
  };
  s.jac_g = [](const VectorXd& x) -> MatrixXd {
    const double theta = x[0], v = x[1];
    MatrixXd J(2, 2);
    J(0, 0) = -v * std::cos(theta);
    J(0, 1) = -std::sin(theta);
    J(1, 0) = -v * std::sin(theta);
    J(1, 1) = std::cos(theta) - 2.0 * v;
    return J;
  };
  s.jac_h = [](const VectorXd&) -> MatrixXd { return MatrixXd::Zero(2, 2); };

  const double half_pi = std::acos(0.0);
  s.domain.lower = VectorXd(2);
  s.domain.upper = VectorXd(2);
  s.domain.lower << -half_pi, 0.0;
  s.domain.upper << half_pi, kInf;
  s.domain.strict = {true, true};

  VectorXd lo(2), hi(2);
  lo << -1.5, 0.01;
  hi << 1.5, 2.0;
  s.sampling_box = {lo, hi};
  VectorXd seed(2);
  seed << 0.0, 1.0;
  s.seed_point = seed;

  s.structural_r = true;
  s.structural_r_note =
      "off-diagonals of the state Jacobian are -sin(theta) and -v*sin(theta): "
      "equal sign pointwise for every (theta, v) in Q, vanishing only on the "
      "measure-zero line theta = 0";
  s.validate();
  return s;
}

namespace {

// Common part of the two convex-concave overloads once p and p' are packaged
// as scalar callables.
ParametricSystem build_convex_concave_impl(
    int n, double L, double q, std::function<double(double)> p_fn,
    std::function<double(double)> dp_fn, const std::string& name) {
  if (!(q > 0.0 && q < 1.0))
    throw BadExponent("concave exponent q must lie in (0, 1)");
  Mesh mesh = make_mesh(n, L);

  ParametricSystem s;
  s.n = n;
  s.name = name;
  MatrixXd Lap = mesh.laplacian;
  s.g = [Lap, p_fn](const VectorXd& u) -> VectorXd {
    VectorXd out = Lap * u;
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] -= p_fn(u[i]);
    return out;
  };
  s.h = [q](const VectorXd& u) -> VectorXd {
    VectorXd out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = std::pow(u[i], q);
    return out;
  };
  s.jac_g = [Lap, dp_fn](const VectorXd& u) -> MatrixXd {
    MatrixXd J = Lap;
    for (Eigen::Index i = 0; i < u.size(); ++i) J(i, i) -= dp_fn(u[i]);
    return J;
  };
  s.jac_h = [q](const VectorXd& u) -> MatrixXd {
    MatrixXd J = MatrixXd::Zero(u.size(), u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i)
      J(i, i) = q * std::pow(u[i], q - 1.0);
    return J;
  };

  s.domain = DomainSpec::positive_orthant(n);
  s.sampling_box = {constant_vector(n, 0.01), constant_vector(n, 8.0)};
  // Interior stand-in for the boundary positivity start (delta, 0, ..., 0):
  // first component delta, the rest delta^2.
  const double delta = 0.01;
  VectorXd seed = constant_vector(n, delta * delta);
  seed[0] = delta;
  s.seed_point = seed;

  s.structural_r = true;
  s.structural_r_note =
      n >= 2 ? "the state Jacobian is tridiagonal with constant negative "
               "off-diagonals -1/tau^2 and an irreducible chain pattern"
             : "scalar problem: no off-diagonal entries; the 1x1 Jacobian is "
               "irreducible by convention";
  s.validate();
  return s;
}

}  // namespace

ParametricSystem build_convex_concave_fd(int n, double L, double q,
                                         double gamma) {
  if (!(gamma > 1.0))
    throw BadExponent("built-in power term needs gamma > 1");
  auto p_fn = [gamma](double t) { return std::pow(t, gamma); };
  auto dp_fn = [gamma](double t) { return gamma * std::pow(t, gamma - 1.0); };
  return build_convex_concave_impl(n, L, q, p_fn, dp_fn, "convex-concave-fd");
}

ParametricSystem build_convex_concave_fd(int n, double L, double q,
                                         const std::string& p_expr) {
  Expression p = Expression::parse(p_expr, 1);
  Expression dp = p.derivative(0);
  auto p_fn = [p](double t) {
    VectorXd arg(1);
    arg[0] = t;
    return p.eval(arg);
  };
  auto dp_fn = [dp](double t) {
    VectorXd arg(1);
    arg[0] = t;
    return dp.eval(arg);
  };

  // Growth spot checks: p(t)/t^q should grow without bound at infinity and
  // p(t)/t should vanish at zero. Sampled, so a warning rather than an error.
  if (q > 0.0 && q < 1.0) {
    const double far1 = p_fn(1e3) / std::pow(1e3, q);
    const double far2 = p_fn(1e6) / std::pow(1e6, q);
    if (!(far2 > far1 && far2 > 1.0))
      std::cerr << "warning: custom p(t) does not look superlinear against "
                   "t^q at large t (checked t = 1e3, 1e6)\n";
    const double near1 = p_fn(1e-3) / 1e-3;
    const double near2 = p_fn(1e-6) / 1e-6;
    if (!(std::abs(near2) < std::abs(near1) || std::abs(near2) < 1e-8))
      std::cerr << "warning: custom p(t)/t does not look like it vanishes "
                   "at 0 (checked t = 1e-3, 1e-6)\n";
  }
  return build_convex_concave_impl(n, L, q, p_fn, dp_fn, "convex-concave-fd");
}

ParametricSystem build_bratu_fd(int n, double L) {
  Mesh mesh = make_mesh(n, L);

  ParametricSystem s;
  s.n = n;
  s.name = "bratu-fd";
  MatrixXd Lap = mesh.laplacian;
  s.g = [Lap](const VectorXd& u) -> VectorXd { return Lap * u; };
  s.h = [](const VectorXd& u) -> VectorXd {
    VectorXd out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = std::exp(u[i]);
    return out;
  };
  s.jac_g = [Lap](const VectorXd&) -> MatrixXd { return Lap; };
  s.jac_h = [](const VectorXd& u) -> MatrixXd {
    MatrixXd J = MatrixXd::Zero(u.size(), u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) J(i, i) = std::exp(u[i]);
    return J;
  };

  s.domain = DomainSpec::positive_orthant(n);
  s.sampling_box = {constant_vector(n, 0.01), constant_vector(n, 3.0)};
  // Positivity start v_i = sin(i*tau), clamped into the sampling box for
  // long intervals where the sine dips below it.
  VectorXd seed(n);
  for (int i = 0; i < n; ++i) seed[i] = std::sin((i + 1) * mesh.tau);
  clamp_into_box(seed, *s.sampling_box);
  s.seed_point = seed;

  s.structural_r = true;
  s.structural_r_note =
      n >= 2 ? "the state Jacobian is tridiagonal with constant negative "
               "off-diagonals -1/tau^2 and an irreducible chain pattern"
             : "scalar problem: no off-diagonal entries; the 1x1 Jacobian is "
               "irreducible by convention";
  s.validate();
  return s;
}

// ---- Config front end -----------------------------------------------------

namespace {

// Problem tables may live at the top level or under a single [section];
// resolve the prefix by looking for the mandatory `kind` key.
std::string table_prefix(const Config& config) {
  if (config.has("kind")) return "";
  std::string prefix;
  for (const auto& [key, value] : config.entries()) {
    const auto pos = key.rfind(".kind");
    if (pos != std::string::npos && pos + 5 == key.size()) {
      if (!prefix.empty())
        throw Error("config defines more than one problem table");
      prefix = key.substr(0, pos + 1);
    }
  }
  if (prefix.empty()) throw Error("config has no `kind` key");
  return prefix;
}

std::vector<bool> to_strict_flags(const Config& config, const std::string& key,
                                  int n) {
  std::vector<bool> flags = config.get_bools(key);
  if (flags.size() == 1) flags.assign(static_cast<std::size_t>(n), flags[0]);
  if (static_cast<int>(flags.size()) != n)
    throw DimensionMismatch("domain.strict length does not match n");
  return flags;
}

}  // namespace

ProblemSpec parse_problem_spec(const Config& config) {
  const std::string t = table_prefix(config);
  auto key = [&t](const char* k) { return t + k; };

  ProblemSpec spec;
  spec.kind = config.get_string(key("kind"));
  spec.name =
      config.has(key("name")) ? config.get_string(key("name")) : spec.kind;

  if (spec.kind == "linear") {
    spec.matrix = config.get_matrix(key("matrix"));
  } else if (spec.kind == "power-flow") {
    spec.p = config.get_number_or(key("p"), 1.0);
    spec.q_param = config.get_number_or(key("q_param"), 1.0);
  } else if (spec.kind == "convex-concave-fd") {
    spec.n = config.get_int(key("n"));
    spec.L = config.get_number_or(key("L"), 1.0);
    spec.q = config.get_number(key("q"));
    if (config.has(key("p"))) spec.p_expr = config.get_string(key("p"));
    else spec.gamma = config.get_number(key("gamma"));
  } else if (spec.kind == "bratu-fd") {
    spec.n = config.get_int(key("n"));
    spec.L = config.get_number_or(key("L"), 1.0);
  } else if (spec.kind == "custom") {
    spec.n = config.get_int(key("n"));
    spec.g_exprs = config.get_strings(key("expressions.g"));
    spec.h_exprs = config.get_strings(key("expressions.h"));
  } else {
    throw Error("unknown problem kind: " + spec.kind);
  }

  if (config.has(key("domain.lower")))
    spec.domain_lower = config.get_vector(key("domain.lower"));
  if (config.has(key("domain.upper")))
    spec.domain_upper = config.get_vector(key("domain.upper"));

  int n_hint = spec.n;
  if (spec.kind == "linear") n_hint = static_cast<int>(spec.matrix.rows());
  if (spec.kind == "power-flow") n_hint = 2;
  if (config.has(key("domain.strict")))
    spec.domain_strict = to_strict_flags(config, key("domain.strict"), n_hint);

  if (config.has(key("sampling_box"))) {
    MatrixXd box = config.get_matrix(key("sampling_box"));
    if (box.rows() != 2)
      throw Error("sampling_box must be [[lower...], [upper...]]");
    spec.sampling_box = {box.row(0).transpose(), box.row(1).transpose()};
  }
  if (config.has(key("seed_point")))
    spec.seed_point = config.get_vector(key("seed_point"));
  return spec;
}

namespace {

ParametricSystem build_custom(const ProblemSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw Error("custom problem needs n >= 1");
  if (static_cast<int>(spec.g_exprs.size()) != n)
    throw DimensionMismatch("expressions.g must list exactly n expressions");
  if (static_cast<int>(spec.h_exprs.size()) != n)
    throw DimensionMismatch("expressions.h must list exactly n expressions");

  std::vector<Expression> g_ast, h_ast;
  std::vector<std::vector<Expression>> dg(n), dh(n);
  for (int i = 0; i < n; ++i) {
    g_ast.push_back(Expression::parse(spec.g_exprs[i], n));
    h_ast.push_back(Expression::parse(spec.h_exprs[i], n));
    for (int j = 0; j < n; ++j) {
      dg[i].push_back(g_ast[i].derivative(j));
      dh[i].push_back(h_ast[i].derivative(j));
    }
  }

  ParametricSystem s;
  s.n = n;
  s.name = spec.name;
  s.g = [g_ast, n](const VectorXd& x) -> VectorXd {
    VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = g_ast[i].eval(x);
    return out;
  };
  s.h = [h_ast, n](const VectorXd& x) -> VectorXd {
    VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = h_ast[i].eval(x);
    return out;
  };
  s.jac_g = [dg, n](const VectorXd& x) -> MatrixXd {
    MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = dg[i][j].eval(x);
    return J;
  };
  s.jac_h = [dh, n](const VectorXd& x) -> MatrixXd {
    MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = dh[i][j].eval(x);
    return J;
  };
  s.domain = DomainSpec::unbounded(n);
  s.structural_r = false;
  return s;
}

}  // namespace

ParametricSystem build_problem(const ProblemSpec& spec) {
  ParametricSystem s;
  if (spec.kind == "linear") {
    std::optional<std::pair<VectorXd, VectorXd>> box;
    if (spec.domain_lower && spec.domain_upper)
      box = {*spec.domain_lower, *spec.domain_upper};
    s = build_linear(spec.matrix, box);
  } else if (spec.kind == "power-flow") {
    s = build_power_flow(spec.p, spec.q_param);
  } else if (spec.kind == "convex-concave-fd") {
    s = spec.p_expr.empty()
            ? build_convex_concave_fd(spec.n, spec.L, spec.q, spec.gamma)
            : build_convex_concave_fd(spec.n, spec.L, spec.q, spec.p_expr);
  } else if (spec.kind == "bratu-fd") {
    s = build_bratu_fd(spec.n, spec.L);
  } else if (spec.kind == "custom") {
    s = build_custom(spec);
  } else {
    throw Error("unknown problem kind: " + spec.kind);
  }

  if (spec.kind == "custom" || spec.kind == "power-flow" ||
      spec.kind == "bratu-fd" || spec.kind == "convex-concave-fd") {
    if (spec.domain_lower) {
      if (spec.domain_lower->size() != s.n)
        throw DimensionMismatch("domain.lower length does not match n");
      s.domain.lower = *spec.domain_lower;
    }
    if (spec.domain_upper) {
      if (spec.domain_upper->size() != s.n)
        throw DimensionMismatch("domain.upper length does not match n");
      s.domain.upper = *spec.domain_upper;
    }
    s.domain.validate();
  }
  if (spec.domain_strict) s.domain.strict = *spec.domain_strict;

  if (spec.sampling_box) {
    if (spec.sampling_box->first.size() != s.n ||
        spec.sampling_box->second.size() != s.n)
      throw DimensionMismatch("sampling_box dimensions do not match n");
    s.sampling_box = spec.sampling_box;
  }
  if (spec.seed_point) {
    if (spec.seed_point->size() != s.n)
      throw DimensionMismatch("seed_point length does not match n");
    s.seed_point = spec.seed_point;
  }
  s.name = spec.name;
  s.validate();
  return s;
}

ParametricSystem parse_problem(const std::string& config_text) {
  return build_problem(parse_problem_spec(Config::parse(config_text)));
}

}  // namespace foldfinder
