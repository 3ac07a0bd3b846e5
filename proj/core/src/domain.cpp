#include "foldfinder/domain.hpp"

#include <algorithm>
#include <cmath>

#include "foldfinder/errors.hpp"

namespace foldfinder {

DomainSpec DomainSpec::box(const VectorXd& lo, const VectorXd& hi) {
  DomainSpec d;
  d.lower = lo;
  d.upper = hi;
  d.strict.assign(static_cast<std::size_t>(lo.size()), true);
  d.validate();
  return d;
}

DomainSpec DomainSpec::positive_orthant(int n) {
  return box(VectorXd::Zero(n), VectorXd::Constant(n, kInf));
}

DomainSpec DomainSpec::unbounded(int n) {
  return box(VectorXd::Constant(n, -kInf), VectorXd::Constant(n, kInf));
}

void DomainSpec::validate() const {
  if (lower.size() != upper.size() ||
      strict.size() != static_cast<std::size_t>(lower.size()))
    throw Error("domain: bound/strictness sizes disagree");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw Error("domain: lower bound must be below upper bound in coordinate " +
                  std::to_string(i + 1));
  if (membership_margin < 0) throw Error("domain: negative membership margin");
}

bool DomainSpec::contains(const VectorXd& x) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) return false;
    bool open = strict[static_cast<std::size_t>(i)];
    if (open ? !(x[i] > lower[i]) : !(x[i] >= lower[i])) return false;
    if (open ? !(x[i] < upper[i]) : !(x[i] <= upper[i])) return false;
  }
  return true;
}

bool DomainSpec::well_inside(const VectorXd& x) const {
  if (!contains(x)) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::isfinite(lower[i]) && x[i] - lower[i] <= membership_margin)
      return false;
    if (std::isfinite(upper[i]) && upper[i] - x[i] <= membership_margin)
      return false;
  }
  return true;
}

double DomainSpec::max_feasible_fraction(const VectorXd& x,
                                         const VectorXd& step) const {
  // Stay a hair away from open faces so the result is strictly interior.
  const double safety = 1.0 - 1e-9;
  double t = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double s = step[i];
    if (s > 0 && std::isfinite(upper[i]))
      t = std::min(t, safety * (upper[i] - x[i]) / s);
    else if (s < 0 && std::isfinite(lower[i]))
      t = std::min(t, safety * (lower[i] - x[i]) / s);
  }
  return std::max(t, 0.0);
}

}  // namespace foldfinder
