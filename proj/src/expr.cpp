// SPDX-License-Identifier: Apache-2.0

#include "akkt/expr.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace akkt {

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)),
      position_(position) {}

DomainError::DomainError(const std::string& what, std::string subexpression)
    : std::runtime_error(what + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)) {}

const char* function_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Exp:
      return "exp";
    case NodeKind::Log:
      return "log";
    case NodeKind::Sin:
      return "sin";
    case NodeKind::Cos:
      return "cos";
    case NodeKind::Sqrt:
      return "sqrt";
    default:
      return "";
  }
}

struct Expr::Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;  // Constant
  int integer = 0;     // Variable index or Power exponent
  std::vector<Expr> children;
};

namespace {

bool is_function(NodeKind k) {
  return k == NodeKind::Exp || k == NodeKind::Log || k == NodeKind::Sin ||
         k == NodeKind::Cos || k == NodeKind::Sqrt;
}

}  // namespace

Expr Expr::constant(double value) {
  if (!std::isfinite(value))
    throw std::invalid_argument("expression constants must be finite");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->integer = index;
  return Expr(std::move(n));
}

Expr Expr::sum(Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Sum;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::product(Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Product;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::quotient(Expr numerator, Expr denominator) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Quotient;
  n->children = {std::move(numerator), std::move(denominator)};
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Power;
  n->integer = exponent;
  n->children = {std::move(base)};
  return Expr(std::move(n));
}

Expr Expr::unary(NodeKind function, Expr argument) {
  if (!is_function(function))
    throw std::invalid_argument("not a unary function kind");
  auto n = std::make_shared<Node>();
  n->kind = function;
  n->children = {std::move(argument)};
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  if (operand.kind() == NodeKind::Constant)
    return constant(-operand.constant_value());
  return product(constant(-1.0), std::move(operand));
}

NodeKind Expr::kind() const { return node_->kind; }

double Expr::constant_value() const {
  if (node_->kind != NodeKind::Constant)
    throw std::logic_error("constant_value on a non-constant node");
  return node_->value;
}

int Expr::variable_index() const {
  if (node_->kind != NodeKind::Variable)
    throw std::logic_error("variable_index on a non-variable node");
  return node_->integer;
}

int Expr::exponent() const {
  if (node_->kind != NodeKind::Power)
    throw std::logic_error("exponent on a non-power node");
  return node_->integer;
}

std::size_t Expr::arity() const { return node_->children.size(); }

const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }

int Expr::max_variable() const {
  if (node_->kind == NodeKind::Variable) return node_->integer;
  int m = -1;
  for (const auto& c : node_->children) m = std::max(m, c.max_variable());
  return m;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
  if (x.kind == NodeKind::Constant && x.value != y.value) return false;
  if ((x.kind == NodeKind::Variable || x.kind == NodeKind::Power) &&
      x.integer != y.integer)
    return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!(x.children[i] == y.children[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing. Precedence levels: sum 1, product/quotient 2, power 3, atom 4.

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Sum:
      return 1;
    case NodeKind::Product:
    case NodeKind::Quotient:
      return 2;
    case NodeKind::Power:
      return 3;
    default:
      return 4;
  }
}

void print(const Expr& e, int min_prec, std::string& out) {
  bool paren = precedence(e) < min_prec;
  if (paren) out += '(';
  switch (e.kind()) {
    case NodeKind::Constant: {
      double v = e.constant_value();
      if (std::signbit(v))
        out += "(-" + format_number(-v) + ")";
      else
        out += format_number(v);
      break;
    }
    case NodeKind::Variable:
      out += 'x';
      out += std::to_string(e.variable_index());
      break;
    case NodeKind::Sum:
      print(e.child(0), 1, out);
      out += " + ";
      print(e.child(1), 2, out);
      break;
    case NodeKind::Product:
    case NodeKind::Quotient:
      print(e.child(0), 2, out);
      out += e.kind() == NodeKind::Product ? "*" : "/";
      print(e.child(1), 3, out);
      break;
    case NodeKind::Power:
      print(e.child(0), 4, out);
      out += '^';
      out += std::to_string(e.exponent());
      break;
    default:
      out += function_name(e.kind());
      out += '(';
      print(e.child(0), 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double checked(double v, const Expr& e) {
  if (!std::isfinite(v)) throw DomainError("non-finite value", e.to_string());
  return v;
}

double eval_value(const Expr& e, const Vector& x) {
  switch (e.kind()) {
    case NodeKind::Constant:
      return e.constant_value();
    case NodeKind::Variable: {
      int i = e.variable_index();
      if (i >= x.size())
        throw std::invalid_argument("variable x" + std::to_string(i) +
                                    " outside point of dimension " +
                                    std::to_string(x.size()));
      return x[i];
    }
    case NodeKind::Sum:
      return checked(eval_value(e.child(0), x) + eval_value(e.child(1), x), e);
    case NodeKind::Product:
      return checked(eval_value(e.child(0), x) * eval_value(e.child(1), x), e);
    case NodeKind::Quotient: {
      double d = eval_value(e.child(1), x);
      if (d == 0.0) throw DomainError("division by zero", e.to_string());
      return checked(eval_value(e.child(0), x) / d, e);
    }
    case NodeKind::Power: {
      double b = eval_value(e.child(0), x);
      int p = e.exponent();
      if (p < 0 && b == 0.0)
        throw DomainError("negative power of zero", e.to_string());
      return checked(std::pow(b, p), e);
    }
    case NodeKind::Exp:
      return checked(std::exp(eval_value(e.child(0), x)), e);
    case NodeKind::Log: {
      double a = eval_value(e.child(0), x);
      if (!(a > 0.0)) throw DomainError("log of nonpositive", e.to_string());
      return checked(std::log(a), e);
    }
    case NodeKind::Sin:
      return checked(std::sin(eval_value(e.child(0), x)), e);
    case NodeKind::Cos:
      return checked(std::cos(eval_value(e.child(0), x)), e);
    case NodeKind::Sqrt: {
      double a = eval_value(e.child(0), x);
      if (a < 0.0) throw DomainError("sqrt of negative", e.to_string());
      return checked(std::sqrt(a), e);
    }
  }
  throw std::logic_error("unknown node kind");
}

void check_gradient(const Vector& g, const Expr& e) {
  if (!g.allFinite()) throw DomainError("non-finite gradient", e.to_string());
}

ValueGrad eval_vg(const Expr& e, const Vector& x) {
  const auto n = x.size();
  ValueGrad out;
  switch (e.kind()) {
    case NodeKind::Constant:
      out.value = e.constant_value();
      out.gradient = Vector::Zero(n);
      return out;
    case NodeKind::Variable:
      out.value = eval_value(e, x);
      out.gradient = Vector::Zero(n);
      out.gradient[e.variable_index()] = 1.0;
      return out;
    case NodeKind::Sum: {
      auto a = eval_vg(e.child(0), x);
      auto b = eval_vg(e.child(1), x);
      out.value = checked(a.value + b.value, e);
      out.gradient = a.gradient + b.gradient;
      break;
    }
    case NodeKind::Product: {
      auto a = eval_vg(e.child(0), x);
      auto b = eval_vg(e.child(1), x);
      out.value = checked(a.value * b.value, e);
      out.gradient = b.value * a.gradient + a.value * b.gradient;
      break;
    }
    case NodeKind::Quotient: {
      auto a = eval_vg(e.child(0), x);
      auto b = eval_vg(e.child(1), x);
      if (b.value == 0.0) throw DomainError("division by zero", e.to_string());
      out.value = checked(a.value / b.value, e);
      out.gradient = (a.gradient - out.value * b.gradient) / b.value;
      break;
    }
    case NodeKind::Power: {
      auto b = eval_vg(e.child(0), x);
      int p = e.exponent();
      if (p < 0 && b.value == 0.0)
        throw DomainError("negative power of zero", e.to_string());
      out.value = checked(std::pow(b.value, p), e);
      if (p == 0)
        out.gradient = Vector::Zero(n);
      else
        out.gradient = (p * std::pow(b.value, p - 1)) * b.gradient;
      break;
    }
    case NodeKind::Exp: {
      auto a = eval_vg(e.child(0), x);
      out.value = checked(std::exp(a.value), e);
      out.gradient = out.value * a.gradient;
      break;
    }
    case NodeKind::Log: {
      auto a = eval_vg(e.child(0), x);
      if (!(a.value > 0.0))
        throw DomainError("log of nonpositive", e.to_string());
      out.value = checked(std::log(a.value), e);
      out.gradient = a.gradient / a.value;
      break;
    }
    case NodeKind::Sin: {
      auto a = eval_vg(e.child(0), x);
      out.value = checked(std::sin(a.value), e);
      out.gradient = std::cos(a.value) * a.gradient;
      break;
    }
    case NodeKind::Cos: {
      auto a = eval_vg(e.child(0), x);
      out.value = checked(std::cos(a.value), e);
      out.gradient = -std::sin(a.value) * a.gradient;
      break;
    }
    case NodeKind::Sqrt: {
      auto a = eval_vg(e.child(0), x);
      if (!(a.value > 0.0))
        throw DomainError("sqrt gradient needs a positive argument",
                          e.to_string());
      out.value = checked(std::sqrt(a.value), e);
      out.gradient = a.gradient / (2.0 * out.value);
      break;
    }
  }
  check_gradient(out.gradient, e);
  return out;
}

}  // namespace

double evaluate(const Expr& e, const Vector& x) { return eval_value(e, x); }

ValueGrad eval_grad(const Expr& e, const Vector& x) { return eval_vg(e, x); }

}  // namespace akkt
