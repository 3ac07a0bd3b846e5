#pragma once

#include <stdexcept>
#include <string>

namespace foldfinder {

// Base class for all library errors so callers can catch in one place.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// x lies outside the problem domain Q.
class DomainViolation : public Error {
 public:
  using Error::Error;
};

// Every component of the weight vector h vanished at the query point, or an
// active component did; the ratio profile is undefined there.
class DegenerateWeight : public Error {
 public:
  using Error::Error;
};

class EmptyActiveSet : public Error {
 public:
  using Error::Error;
};

// Matrix analysis -----------------------------------------------------------

class NotSignConstant : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// Solver --------------------------------------------------------------------

class InfeasibleStart : public Error {
 public:
  using Error::Error;
};

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

// Continuation ---------------------------------------------------------------

class StartInfeasible : public Error {
 public:
  using Error::Error;
};

class CorrectorDivergence : public Error {
 public:
  using Error::Error;
};

// Problem builders ------------------------------------------------------------

class NotIrreducible : public Error {
 public:
  using Error::Error;
};

class NegativeEntry : public Error {
 public:
  using Error::Error;
};

class NonpositiveParameter : public Error {
 public:
  using Error::Error;
};

class BadExponent : public Error {
 public:
  using Error::Error;
};

// Parsing ----------------------------------------------------------------------

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownIdentifier : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace foldfinder
