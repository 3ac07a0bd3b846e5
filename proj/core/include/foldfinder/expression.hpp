#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

namespace foldfinder {

using Eigen::VectorXd;

namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
}  // namespace detail

// Immutable scalar expression over variables x1..xn.
//
// Grammar (standard precedence, ^ right-associative, unary minus binds
// tighter than ^'s base but looser than a primary, so -x1^2 = -(x1^2)):
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?
//   primary := number | name '(' expr (',' expr)* ')' | name | '(' expr ')'
// Functions: sin, cos, exp, log, pow(a, b). Variables: x1..xn.
//
// Parsed trees are immutable and safe to share across threads.
class Expression {
 public:
  Expression() = default;

  // Throws ParseError (with line/column) on malformed input and
  // UnknownIdentifier for names other than x1..xn and the function set.
  static Expression parse(const std::string& text, int n_vars);

  static Expression constant(double value);

  double eval(const VectorXd& x) const;

  // Symbolic partial derivative with respect to x_{var+1}, simplified.
  Expression derivative(int var) const;

  std::string to_string() const;

  int n_vars() const { return n_vars_; }
  bool empty() const { return root_ == nullptr; }

 private:
  Expression(detail::NodePtr root, int n_vars)
      : root_(std::move(root)), n_vars_(n_vars) {}

  detail::NodePtr root_;
  int n_vars_ = 0;
};

}  // namespace foldfinder
