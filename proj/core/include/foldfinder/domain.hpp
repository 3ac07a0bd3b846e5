#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace foldfinder {

using Eigen::VectorXd;

// Open (or half-open) axis-aligned box describing the domain Q. Infinite
// bounds are allowed; `strict` marks per-coordinate open bounds.
struct DomainSpec {
  VectorXd lower;
  VectorXd upper;
  std::vector<bool> strict;        // per coordinate; default all true
  double membership_margin = 0.0;  // "near boundary" flag distance

  static DomainSpec box(const VectorXd& lo, const VectorXd& hi);
  // (0, +inf)^n, all bounds strict.
  static DomainSpec positive_orthant(int n);
  // (-inf, +inf)^n.
  static DomainSpec unbounded(int n);

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(const VectorXd& x) const;
  // True for members whose distance to every finite bound exceeds the margin.
  bool well_inside(const VectorXd& x) const;
  // Largest t in [0, 1] such that x + t*step stays inside (strictly, with a
  // small safety factor); used to clamp line searches and trust regions.
  double max_feasible_fraction(const VectorXd& x, const VectorXd& step) const;

  void validate() const;  // throws Error on inconsistent bounds
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace foldfinder
