// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "akkt/residual.hpp"
#include "support/oracles.hpp"

using namespace akkt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

Multipliers mult(std::initializer_list<double> l, std::initializer_list<double> m,
                 std::initializer_list<double> t) {
  return {vec(l), vec(m), vec(t)};
}

Problem two_equalities() {
  Problem pr;
  pr.name = "two-eq";
  pr.n = 2;
  pr.objectives.push_back({{parse_expr("x0^2 + x1", 2)}, "f", false});
  pr.inequalities.push_back({{parse_expr("x0 - x1", 2), parse_expr("x1^2 - 1", 2)}, "g", false});
  pr.equalities = {parse_expr("x0 + x1^2 - 1", 2), parse_expr("sin(x0) - x1", 2)};
  return pr;
}

}  // namespace

TEST_CASE("mangasarian examples") {
  const Problem& p1 = builtin("mangasarian").problem;
  CHECK(residual_m(p1, vec({-0.5}), mult({1.0}, {1.0}, {})).value == 0.0);
  CHECK(residual_m(p1, vec({-0.5}), mult({1.0}, {0.0}, {})).value == 1.0);
}

TEST_CASE("linear tradeoff vanishes in both modes") {
  const Problem& p3 = builtin("linear-tradeoff").problem;
  Multipliers m = mult({0.5, 0.5}, {}, {-0.5});
  ResidualResult g = residual_m(p3, vec({0.5, 0.5}), m, kDefaultEpsAct, ResidualMode::General);
  ResidualResult p = residual_m(p3, vec({0.5, 0.5}), m, kDefaultEpsAct, ResidualMode::Prime);
  CHECK(g.value <= 1e-15);
  CHECK(p.value <= 1e-15);
  CHECK(g.branch_signs == std::vector<int>{1});
  CHECK(p.branch_signs == std::vector<int>{1});
}

TEST_CASE("general mode may flip an equality sign") {
  const Problem& p3 = builtin("linear-tradeoff").problem;
  Multipliers m = mult({0.5, 0.5}, {}, {0.5});
  ResidualResult g = residual_m(p3, vec({0.5, 0.5}), m, kDefaultEpsAct, ResidualMode::General);
  ResidualResult p = residual_m(p3, vec({0.5, 0.5}), m, kDefaultEpsAct, ResidualMode::Prime);
  CHECK(g.value <= 1e-15);
  CHECK(g.branch_signs == std::vector<int>{-1});
  CHECK(p.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("witness selections reproduce the minimizing point") {
  const Problem& p2 = builtin("abs-biobjective").problem;
  ResidualResult r = residual_m(p2, vec({0.5}), mult({0.5, 0.5}, {}, {}));
  CHECK(r.value == 0.0);
  REQUIRE(r.xi.size() == 2);
  Vector sum = 0.5 * r.xi[0] + 0.5 * r.xi[1];
  CHECK((sum - r.point).norm() <= 1e-12);
  CHECK(r.xi[0] == vec({1.0}));
  CHECK(r.xi[1] == vec({-1.0}));
}

TEST_CASE("without equalities the modes coincide exactly") {
  oracle::Rng rng(31);
  for (const auto& e : catalog()) {
    if (e.problem.r() != 0) continue;
    for (int s = 0; s < 20; ++s) {
      Vector x = e.candidate + rng.vector(e.problem.n, -0.5, 0.5);
      Multipliers m{rng.vector(static_cast<int>(e.problem.p()), 0.0, 1.0),
                    rng.vector(static_cast<int>(e.problem.m()), 0.0, 2.0), Vector(0)};
      double g = residual_m(e.problem, x, m, kDefaultEpsAct, ResidualMode::General).value;
      double p = residual_m(e.problem, x, m, kDefaultEpsAct, ResidualMode::Prime).value;
      CHECK(g == p);
    }
  }
}

TEST_CASE("general never exceeds prime") {
  Problem pr = two_equalities();
  oracle::Rng rng(37);
  for (int s = 0; s < 50; ++s) {
    Vector x = rng.vector(2, -1.0, 1.0);
    Multipliers m{rng.vector(1, 0.0, 1.0), rng.vector(1, 0.0, 1.0), rng.vector(2, -2.0, 2.0)};
    double g = residual_m(pr, x, m, kDefaultEpsAct, ResidualMode::General).value;
    double p = residual_m(pr, x, m, kDefaultEpsAct, ResidualMode::Prime).value;
    CHECK(g <= p);
  }
}

TEST_CASE("positive homogeneity") {
  Problem pr = two_equalities();
  oracle::Rng rng(41);
  for (int s = 0; s < 30; ++s) {
    Vector x = rng.vector(2, -1.0, 1.0);
    Multipliers m{rng.vector(1, 0.1, 1.0), rng.vector(1, 0.0, 1.0), rng.vector(2, -2.0, 2.0)};
    double c = rng.uniform(0.1, 10.0);
    for (ResidualMode mode : {ResidualMode::General, ResidualMode::Prime}) {
      double base = residual_m(pr, x, m, kDefaultEpsAct, mode).value;
      double scaled = residual_m(pr, x, m.scaled(c), kDefaultEpsAct, mode).value;
      CHECK(scaled == doctest::Approx(c * base).epsilon(1e-9));
    }
  }
}

TEST_CASE("preconditions") {
  const Problem& p1 = builtin("mangasarian").problem;
  CHECK_THROWS_AS(residual_m(p1, vec({0.0}), mult({0.0}, {0.0}, {})), std::invalid_argument);
  CHECK_THROWS_AS(residual_m(p1, vec({0.0}), mult({-1.0}, {0.0}, {})), std::invalid_argument);
  CHECK_THROWS_AS(residual_m(p1, vec({0.0}), mult({1.0}, {-1.0}, {})), std::invalid_argument);
  CHECK_THROWS_AS(residual_m(p1, vec({0.0}), mult({1.0, 0.0}, {0.0}, {})), std::invalid_argument);
  CHECK_THROWS_AS(residual_m(p1, vec({0.0, 1.0}), mult({1.0}, {0.0}, {})), std::invalid_argument);

  Problem wide;
  wide.name = "wide";
  wide.n = 1;
  wide.objectives.push_back({{parse_expr("x0", 1)}, "f", true});
  for (int j = 0; j < 13; ++j) wide.equalities.push_back(parse_expr("x0", 1));
  Multipliers m{vec({1.0}), Vector(0), Vector::Ones(13)};
  CHECK_THROWS_AS(residual_m(wide, vec({0.0}), m, kDefaultEpsAct, ResidualMode::General),
                  std::invalid_argument);
  CHECK_NOTHROW(residual_m(wide, vec({0.0}), m, kDefaultEpsAct, ResidualMode::Prime));
  wide.equalities.pop_back();
  Multipliers twelve{vec({1.0}), Vector(0), Vector::Ones(12)};
  CHECK_NOTHROW(residual_m(wide, vec({0.0}), twelve, kDefaultEpsAct, ResidualMode::General));
}

TEST_CASE("mode names") {
  CHECK(residual_mode_from_string("general") == ResidualMode::General);
  CHECK(residual_mode_from_string("prime") == ResidualMode::Prime);
  CHECK(std::string(to_string(ResidualMode::Prime)) == "prime");
  CHECK_THROWS_AS(residual_mode_from_string("other"), std::invalid_argument);
}
