// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "akkt/expr.hpp"
#include "support/oracles.hpp"

using namespace akkt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

std::size_t parse_error_position(const std::string& text, int n) {
  try {
    parse_expr(text, n);
  } catch (const ParseError& e) {
    return e.position();
  }
  FAIL("expected a parse error for '" << text << "'");
  return 0;
}

}  // namespace

TEST_CASE("grammar productions build the expected trees") {
  CHECK(parse_expr("x0^2", 1) == Expr::power(Expr::variable(0), 2));
  CHECK(parse_expr("x0 + 2*x1", 2) ==
        Expr::sum(Expr::variable(0), Expr::product(Expr::constant(2.0), Expr::variable(1))));
  CHECK(parse_expr("(x0)", 1) == Expr::variable(0));
  CHECK(parse_expr("exp(x0)*x1", 2) ==
        Expr::product(Expr::unary(NodeKind::Exp, Expr::variable(0)), Expr::variable(1)));
}

TEST_CASE("exponent binds tighter than unary minus") {
  Expr e = parse_expr("-x0^2", 1);
  CHECK(evaluate(e, vec({3.0})) == -9.0);
  CHECK(evaluate(parse_expr("(-x0)^2", 1), vec({3.0})) == 9.0);
  CHECK(evaluate(parse_expr("2^-1", 1), vec({0.0})) == 0.5);
  CHECK(evaluate(parse_expr("--x0", 1), vec({4.0})) == 4.0);
}

TEST_CASE("subtraction is sum with negation and folds constants") {
  CHECK(parse_expr("x0 - 1", 1) == Expr::sum(Expr::variable(0), Expr::constant(-1.0)));
  CHECK(parse_expr("x0 - x1", 2) ==
        Expr::sum(Expr::variable(0), Expr::product(Expr::constant(-1.0), Expr::variable(1))));
  CHECK(Expr::negate(Expr::constant(2.5)) == Expr::constant(-2.5));
}

TEST_CASE("left associativity of - and /") {
  CHECK(evaluate(parse_expr("8 - 2 - 1", 1), vec({0.0})) == 5.0);
  CHECK(evaluate(parse_expr("8 / 2 / 2", 1), vec({0.0})) == 2.0);
  CHECK(evaluate(parse_expr("2 * 3 ^ 2", 1), vec({0.0})) == 18.0);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_expr("x2", 2), ParseError);
  CHECK(parse_error_position("x2", 2) == 0);
  CHECK(parse_error_position("x0 + * 2", 1) == 5);
  CHECK(parse_error_position("tan(x0)", 1) == 0);
  CHECK(parse_error_position("x0 + foo", 1) == 5);
  CHECK(parse_error_position("(x0", 1) == 3);
  CHECK(parse_error_position("x0 )", 1) == 3);
  CHECK(parse_error_position("", 1) == 0);
  CHECK(parse_error_position("x0^1.5", 1) == 4);
  CHECK_THROWS_AS(parse_expr("x0", 0), std::invalid_argument);
}

TEST_CASE("eval_grad examples") {
  ValueGrad a = eval_grad(parse_expr("x0^2", 1), vec({3.0}));
  CHECK(a.value == 9.0);
  CHECK(a.gradient[0] == 6.0);

  ValueGrad b = eval_grad(parse_expr("x0 + 2*x1", 2), vec({1.0, 1.0}));
  CHECK(b.value == 3.0);
  CHECK(b.gradient == vec({1.0, 2.0}));

  Expr e = parse_expr("exp(x0)*x1", 2);
  Vector x = vec({0.0, 5.0});
  ValueGrad c = eval_grad(e, x);
  CHECK(c.value == 5.0);
  CHECK(c.gradient == vec({5.0, 1.0}));
  Vector fd = oracle::fd_gradient(e, x);
  CHECK((fd - c.gradient).norm() <= 1e-5 * c.gradient.norm());
}

TEST_CASE("analytic functions and their derivatives") {
  Vector x = vec({0.7, -1.3});
  for (const char* text : {"sin(x0)*cos(x1)", "log(1 + x0^2)", "sqrt(x0^2 + x1^2)", "x0/(2 + x1)",
                           "x0^-2", "exp(-x0*x1)", "(x0 - x1)^3"}) {
    Expr e = parse_expr(text, 2);
    Vector g = eval_grad(e, x).gradient;
    Vector fd = oracle::fd_gradient(e, x);
    INFO(text);
    CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
    CHECK(eval_grad(e, x).value == evaluate(e, x));
  }
}

TEST_CASE("constant expressions have an exactly zero gradient") {
  for (const char* text : {"3", "sin(2)*4", "2^3 - 8", "log(5)"}) {
    ValueGrad vg = eval_grad(parse_expr(text, 3), vec({1.0, 2.0, 3.0}));
    CHECK((vg.gradient.array() == 0.0).all());
  }
}

TEST_CASE("domain guards raise instead of producing NaN") {
  CHECK_THROWS_AS(evaluate(parse_expr("log(x0)", 1), vec({0.0})), DomainError);
  CHECK_THROWS_AS(evaluate(parse_expr("log(x0)", 1), vec({-1.0})), DomainError);
  CHECK_THROWS_AS(evaluate(parse_expr("1/x0", 1), vec({0.0})), DomainError);
  CHECK_THROWS_AS(evaluate(parse_expr("sqrt(x0)", 1), vec({-1e-3})), DomainError);
  CHECK(evaluate(parse_expr("sqrt(x0)", 1), vec({0.0})) == 0.0);
  CHECK_THROWS_AS(eval_grad(parse_expr("sqrt(x0)", 1), vec({0.0})), DomainError);
  CHECK_THROWS_AS(evaluate(parse_expr("x0^-1", 1), vec({0.0})), DomainError);
  CHECK_THROWS_AS(evaluate(parse_expr("exp(x0)", 1), vec({1000.0})), DomainError);
  CHECK_THROWS_AS(evaluate(parse_expr("x1", 2), vec({1.0})), std::invalid_argument);
}

TEST_CASE("domain errors name the offending subexpression") {
  try {
    evaluate(parse_expr("x0 + log(x0 - 1)", 1), vec({0.5}));
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("log") != std::string::npos);
  }
}

TEST_CASE("print then parse is structurally identical") {
  oracle::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    Expr e = oracle::random_expr(rng, 3, 4);
    std::string text = e.to_string();
    INFO(text);
    CHECK(parse_expr(text, 3) == e);
  }
  Expr neg = Expr::product(Expr::constant(-2.0), Expr::power(Expr::variable(0), 2));
  CHECK(parse_expr(neg.to_string(), 1) == neg);
  Expr tiny = Expr::constant(1e-300);
  CHECK(parse_expr(tiny.to_string(), 1) == tiny);
}

TEST_CASE("random gradients match central differences") {
  oracle::Rng rng(11);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = rng.integer(1, 3);
    Expr e = oracle::random_expr(rng, n, 4);
    Vector x = rng.vector(n, -1.5, 1.5);
    Vector g = eval_grad(e, x).gradient;
    Vector fd = oracle::fd_gradient(e, x);
    for (int j = 0; j < n; ++j) {
      INFO(e.to_string());
      CHECK(std::abs(g[j] - fd[j]) <= 1e-5 * std::max(1.0, std::abs(g[j])));
    }
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("max_variable reports the largest index") {
  CHECK(parse_expr("x0 + x2*x1", 3).max_variable() == 2);
  CHECK(parse_expr("5", 3).max_variable() == -1);
}
