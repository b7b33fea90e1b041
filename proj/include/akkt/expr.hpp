// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace akkt {

using Vector = Eigen::VectorXd;

/// Raised by parse_expr; carries the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Raised when an evaluation leaves the domain of a node (log of a
/// nonpositive number, division by zero, ...) or produces NaN/inf.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression);
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

enum class NodeKind {
  Constant,
  Variable,
  Sum,
  Product,
  Quotient,
  Power,
  Exp,
  Log,
  Sin,
  Cos,
  Sqrt,
};

const char* function_name(NodeKind kind);

/// Immutable expression tree for a C^1 scalar function of x0..x{n-1}.
///
/// Nodes are shared, so copies are cheap and expressions may be used from
/// several threads at once. There is no subtraction or negation node:
/// `a - b` is stored as `a + (-1)*b` and negated constants are folded.
class Expr {
 public:
  static Expr constant(double value);
  static Expr variable(int index);
  static Expr sum(Expr lhs, Expr rhs);
  static Expr product(Expr lhs, Expr rhs);
  static Expr quotient(Expr numerator, Expr denominator);
  static Expr power(Expr base, int exponent);
  static Expr unary(NodeKind function, Expr argument);
  static Expr negate(Expr operand);

  NodeKind kind() const;
  double constant_value() const;
  int variable_index() const;
  int exponent() const;
  std::size_t arity() const;
  const Expr& child(std::size_t i) const;

  /// Largest variable index referenced, or -1 for a closed expression.
  int max_variable() const;

  /// Canonical infix form; parse_expr(to_string()) reproduces the tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct ValueGrad {
  double value = 0.0;
  Vector gradient;
};

/// Value only. Uses the value-level guards (sqrt admits 0).
double evaluate(const Expr& e, const Vector& x);

/// Value and exact gradient by forward accumulation. The gradient has the
/// size of x. sqrt requires a strictly positive argument here.
ValueGrad eval_grad(const Expr& e, const Vector& x);

/// Parses the infix grammar
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' ['-'] integer)?
///   atom   := number | 'x' integer | func '(' expr ')' | '(' expr ')'
/// with func in {exp, log, sin, cos, sqrt}. Exponentiation binds tighter
/// than unary minus, so "-x0^2" is -(x0^2).
Expr parse_expr(std::string_view text, int n);

}  // namespace akkt
