#include "foldfinder/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>
#include <vector>

#include "foldfinder/errors.hpp"

namespace foldfinder {
namespace detail {

enum class Op {
  kConst,
  kVar,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kSin,
  kCos,
  kExp,
  kLog,
};

struct ExprNode {
  Op op;
  double value = 0.0;  // kConst
  int var = -1;        // kVar
  NodePtr a, b;
};

namespace {

NodePtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::kConst;
  n->value = v;
  return n;
}

NodePtr make_var(int i) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::kVar;
  n->var = i;
  return n;
}

NodePtr make1(Op op, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

NodePtr make2(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->op == Op::kConst && n->value == v;
}

// Light algebraic cleanup: constant folding plus identity/annihilator rules.
// Keeps derivative trees small; not a full CAS.
NodePtr simplify(NodePtr n) {
  if (!n || n->op == Op::kConst || n->op == Op::kVar) return n;
  NodePtr a = simplify(n->a);
  NodePtr b = n->b ? simplify(n->b) : nullptr;

  auto both_const = [&] { return a->op == Op::kConst && (!b || b->op == Op::kConst); };

  switch (n->op) {
    case Op::kNeg:
      if (a->op == Op::kConst) return make_const(-a->value);
      if (a->op == Op::kNeg) return a->a;
      break;
    case Op::kAdd:
      if (both_const()) return make_const(a->value + b->value);
      if (is_const(a, 0)) return b;
      if (is_const(b, 0)) return a;
      break;
    case Op::kSub:
      if (both_const()) return make_const(a->value - b->value);
      if (is_const(b, 0)) return a;
      if (is_const(a, 0)) return simplify(make1(Op::kNeg, b));
      break;
    case Op::kMul:
      if (both_const()) return make_const(a->value * b->value);
      if (is_const(a, 0) || is_const(b, 0)) return make_const(0);
      if (is_const(a, 1)) return b;
      if (is_const(b, 1)) return a;
      break;
    case Op::kDiv:
      if (both_const() && b->value != 0) return make_const(a->value / b->value);
      if (is_const(a, 0)) return make_const(0);
      if (is_const(b, 1)) return a;
      break;
    case Op::kPow:
      if (both_const()) return make_const(std::pow(a->value, b->value));
      if (is_const(b, 0)) return make_const(1);
      if (is_const(b, 1)) return a;
      break;
    default:
      if (a->op == Op::kConst) {
        switch (n->op) {
          case Op::kSin: return make_const(std::sin(a->value));
          case Op::kCos: return make_const(std::cos(a->value));
          case Op::kExp: return make_const(std::exp(a->value));
          case Op::kLog: return make_const(std::log(a->value));
          default: break;
        }
      }
      break;
  }
  auto out = std::make_shared<ExprNode>();
  out->op = n->op;
  out->a = std::move(a);
  out->b = std::move(b);
  return out;
}

double eval_node(const ExprNode& n, const VectorXd& x) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVar: return x[n.var];
    case Op::kNeg: return -eval_node(*n.a, x);
    case Op::kAdd: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Op::kSub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Op::kMul: return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Op::kDiv: return eval_node(*n.a, x) / eval_node(*n.b, x);
    case Op::kPow: return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
    case Op::kSin: return std::sin(eval_node(*n.a, x));
    case Op::kCos: return std::cos(eval_node(*n.a, x));
    case Op::kExp: return std::exp(eval_node(*n.a, x));
    case Op::kLog: return std::log(eval_node(*n.a, x));
  }
  return 0.0;
}

NodePtr diff(const NodePtr& n, int var) {
  switch (n->op) {
    case Op::kConst: return make_const(0);
    case Op::kVar: return make_const(n->var == var ? 1 : 0);
    case Op::kNeg: return make1(Op::kNeg, diff(n->a, var));
    case Op::kAdd: return make2(Op::kAdd, diff(n->a, var), diff(n->b, var));
    case Op::kSub: return make2(Op::kSub, diff(n->a, var), diff(n->b, var));
    case Op::kMul:
      return make2(Op::kAdd, make2(Op::kMul, diff(n->a, var), n->b),
                   make2(Op::kMul, n->a, diff(n->b, var)));
    case Op::kDiv:
      // (a'b - ab') / b^2
      return make2(Op::kDiv,
                   make2(Op::kSub, make2(Op::kMul, diff(n->a, var), n->b),
                         make2(Op::kMul, n->a, diff(n->b, var))),
                   make2(Op::kPow, n->b, make_const(2)));
    case Op::kPow:
      if (n->b->op == Op::kConst) {
        // c * a^(c-1) * a'
        return make2(Op::kMul,
                     make2(Op::kMul, make_const(n->b->value),
                           make2(Op::kPow, n->a, make_const(n->b->value - 1))),
                     diff(n->a, var));
      }
      // a^b * (b' log a + b a'/a)
      return make2(
          Op::kMul, make2(Op::kPow, n->a, n->b),
          make2(Op::kAdd, make2(Op::kMul, diff(n->b, var), make1(Op::kLog, n->a)),
                make2(Op::kDiv, make2(Op::kMul, n->b, diff(n->a, var)), n->a)));
    case Op::kSin:
      return make2(Op::kMul, make1(Op::kCos, n->a), diff(n->a, var));
    case Op::kCos:
      return make1(Op::kNeg,
                   make2(Op::kMul, make1(Op::kSin, n->a), diff(n->a, var)));
    case Op::kExp:
      return make2(Op::kMul, make1(Op::kExp, n->a), diff(n->a, var));
    case Op::kLog:
      return make2(Op::kDiv, diff(n->a, var), n->a);
  }
  return make_const(0);
}

void print_node(const ExprNode& n, std::ostream& os);

void print_paren(const ExprNode& n, std::ostream& os) {
  os << '(';
  print_node(n, os);
  os << ')';
}

// Fully parenthesized except leaves; round-trips through parse().
void print_node(const ExprNode& n, std::ostream& os) {
  switch (n.op) {
    case Op::kConst: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      std::string s = tmp.str();
      if (n.value < 0) os << '(' << s << ')'; else os << s;
      break;
    }
    case Op::kVar: os << 'x' << (n.var + 1); break;
    case Op::kNeg: os << "(-"; print_paren(*n.a, os); os << ')'; break;
    case Op::kAdd: os << '('; print_node(*n.a, os); os << " + "; print_node(*n.b, os); os << ')'; break;
    case Op::kSub: os << '('; print_node(*n.a, os); os << " - "; print_node(*n.b, os); os << ')'; break;
    case Op::kMul: os << '('; print_node(*n.a, os); os << " * "; print_node(*n.b, os); os << ')'; break;
    case Op::kDiv: os << '('; print_node(*n.a, os); os << " / "; print_node(*n.b, os); os << ')'; break;
    case Op::kPow: os << '('; print_node(*n.a, os); os << " ^ "; print_node(*n.b, os); os << ')'; break;
    case Op::kSin: os << "sin"; print_paren(*n.a, os); break;
    case Op::kCos: os << "cos"; print_paren(*n.a, os); break;
    case Op::kExp: os << "exp"; print_paren(*n.a, os); break;
    case Op::kLog: os << "log"; print_paren(*n.a, os); break;
  }
}

// ---------------------------------------------------------------------------

struct Token {
  enum Kind { kNumber, kName, kPunct, kEnd } kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && skippable()) step();
    tok_.line = line_;
    tok_.column = column_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::kEnd;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok_.kind = Token::kName;
      tok_.text.clear();
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        tok_.text += text_[pos_];
        step();
      }
    } else if (is_unicode_minus()) {
      tok_.kind = Token::kPunct;
      tok_.text = "-";
      step(); step(); step();
    } else {
      tok_.kind = Token::kPunct;
      tok_.text = std::string(1, c);
      step();
    }
  }

  bool skippable() const {
    char c = text_[pos_];
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  }

  // U+2212 (some documents use the typographic minus sign).
  bool is_unicode_minus() const {
    return pos_ + 2 < text_.size() &&
           static_cast<unsigned char>(text_[pos_]) == 0xe2 &&
           static_cast<unsigned char>(text_[pos_ + 1]) == 0x88 &&
           static_cast<unsigned char>(text_[pos_ + 2]) == 0x92;
  }

  void lex_number() {
    tok_.kind = Token::kNumber;
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    tok_.number = std::strtod(begin, &end);
    if (end == begin)
      throw ParseError("malformed number", line_, column_);
    std::size_t len = static_cast<std::size_t>(end - begin);
    tok_.text = text_.substr(pos_, len);
    for (std::size_t k = 0; k < len; ++k) step();
  }

  void step() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, int n_vars) : lex_(text), n_vars_(n_vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    const Token& t = lex_.peek();
    if (t.kind != Token::kEnd)
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line,
                       t.column);
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Token::kPunct && (t.text == "+" || t.text == "-")) {
        Op op = t.text == "+" ? Op::kAdd : Op::kSub;
        lex_.next();
        e = make2(op, e, term());
      } else {
        return e;
      }
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Token::kPunct && (t.text == "*" || t.text == "/")) {
        Op op = t.text == "*" ? Op::kMul : Op::kDiv;
        lex_.next();
        e = make2(op, e, factor());
      } else {
        return e;
      }
    }
  }

  NodePtr factor() {
    const Token& t = lex_.peek();
    if (t.kind == Token::kPunct && t.text == "-") {
      lex_.next();
      return make1(Op::kNeg, factor());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    const Token& t = lex_.peek();
    if (t.kind == Token::kPunct && t.text == "^") {
      lex_.next();
      return make2(Op::kPow, base, factor());  // right-associative
    }
    return base;
  }

  NodePtr primary() {
    Token t = lex_.next();
    if (t.kind == Token::kNumber) return make_const(t.number);
    if (t.kind == Token::kName) return name(t);
    if (t.kind == Token::kPunct && t.text == "(") {
      NodePtr e = expr();
      expect(")");
      return e;
    }
    throw ParseError(t.kind == Token::kEnd
                         ? "unexpected end of expression"
                         : "unexpected token '" + t.text + "'",
                     t.line, t.column);
  }

  NodePtr name(const Token& t) {
    const std::string& s = t.text;
    if (s.size() >= 2 && s[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < s.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(s[i]));
      if (digits) {
        int idx = std::atoi(s.c_str() + 1);
        if (idx < 1 || idx > n_vars_)
          throw UnknownIdentifier("variable " + s + " out of range for an n=" +
                                  std::to_string(n_vars_) + " problem");
        return make_var(idx - 1);
      }
    }
    if (s == "sin" || s == "cos" || s == "exp" || s == "log") {
      expect("(");
      NodePtr a = expr();
      expect(")");
      Op op = s == "sin" ? Op::kSin
              : s == "cos" ? Op::kCos
              : s == "exp" ? Op::kExp
                           : Op::kLog;
      return make1(op, a);
    }
    if (s == "pow") {
      expect("(");
      NodePtr a = expr();
      expect(",");
      NodePtr b = expr();
      expect(")");
      return make2(Op::kPow, a, b);
    }
    throw UnknownIdentifier("unknown identifier '" + s + "'");
  }

  void expect(const std::string& punct) {
    Token t = lex_.next();
    if (t.kind != Token::kPunct || t.text != punct)
      throw ParseError("expected '" + punct + "'", t.line, t.column);
  }

  Lexer lex_;
  int n_vars_;
};

}  // namespace
}  // namespace detail

Expression Expression::parse(const std::string& text, int n_vars) {
  detail::Parser parser(text, n_vars);
  return Expression(detail::simplify(parser.parse()), n_vars);
}

Expression Expression::constant(double value) {
  return Expression(detail::make_const(value), 0);
}

double Expression::eval(const VectorXd& x) const {
  return detail::eval_node(*root_, x);
}

Expression Expression::derivative(int var) const {
  return Expression(detail::simplify(detail::diff(root_, var)), n_vars_);
}

std::string Expression::to_string() const {
  std::ostringstream os;
  detail::print_node(*root_, os);
  return os.str();
}

}  // namespace foldfinder
