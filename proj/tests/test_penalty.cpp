// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "akkt/penalty.hpp"
#include "support/oracles.hpp"

using namespace akkt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

PenaltyConfig schedule(double first, double last) {
  PenaltyConfig cfg;
  cfg.schedule = geometric_schedule(first, last);
  return cfg;
}

const std::vector<SequenceRecord>& corpus_sequence(const std::string& name) {
  static std::map<std::string, std::vector<SequenceRecord>> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    const CatalogEntry& e = builtin(name);
    it = cache.emplace(name, generate_akkt_sequence(e.problem, e.candidate)).first;
  }
  return it->second;
}

}  // namespace

TEST_CASE("geometric schedules") {
  CHECK(geometric_schedule(1.0, 1e8).size() == 9);
  CHECK(geometric_schedule(1.0, 1e6).back() == 1e6);
  CHECK(geometric_schedule(5.0, 5.0) == std::vector<double>{5.0});
  CHECK_THROWS_AS(geometric_schedule(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(geometric_schedule(10.0, 1.0), std::invalid_argument);
  PenaltyConfig cfg;
  CHECK(cfg.schedule == geometric_schedule(1.0, 1e8));
  CHECK(cfg.delta == 1.0);
  CHECK(cfg.max_iterations == 5000);
}

TEST_CASE("config validation") {
  PenaltyConfig cfg;
  cfg.delta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.schedule = {1.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.schedule = {};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.schedule = {-1.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("mangasarian subproblem at k = 1 matches the bisection oracle") {
  const Problem& p1 = builtin("mangasarian").problem;
  PenaltyConfig cfg;
  SubproblemResult r = solve_subproblem(p1, vec({0.0}), 1.0, cfg, vec({0.0}));
  const double want = oracle::mangasarian_penalty_minimizer(1.0);
  CHECK(want == doctest::Approx(-0.590).epsilon(1e-2));
  CHECK(std::abs(1.0 + 2.0 * want * want * want + want) <= 1e-12);
  CHECK(std::abs(r.x[0] - want) <= 1e-2);
  CHECK(std::abs(r.x[0] - want) <= 1e-8);
  CHECK(r.beats_reference);
  CHECK_FALSE(r.flagged);
  CHECK(r.value == penalty_objective(p1, r.x, vec({0.0}), 1.0));
}

TEST_CASE("mangasarian subproblem at k = 1e6") {
  const Problem& p1 = builtin("mangasarian").problem;
  PenaltyConfig cfg;
  SubproblemResult r = solve_subproblem(p1, vec({0.0}), 1e6, cfg, vec({0.0}));
  CHECK(r.x[0] < 0.0);
  CHECK(std::abs(r.x[0]) <= 1e-2);
  const double want = oracle::mangasarian_penalty_minimizer(1e6);
  CHECK(want == doctest::Approx(-std::cbrt(1.0 / 2e6)).epsilon(1e-2));
  CHECK(std::abs(r.x[0] - want) <= 1e-8);
}

TEST_CASE("subproblem stays in the ball and respects x_init") {
  const Problem& p1 = builtin("mangasarian").problem;
  PenaltyConfig cfg;
  cfg.delta = 0.1;
  SubproblemResult r = solve_subproblem(p1, vec({0.0}), 1.0, cfg, vec({0.0}));
  CHECK(std::abs(r.x[0]) <= 0.1 * (1.0 + 1e-12));
  CHECK(r.x[0] == doctest::Approx(-0.1).epsilon(1e-9));
  CHECK_THROWS_AS(solve_subproblem(p1, vec({0.0}), 1.0, cfg, vec({0.5})), std::invalid_argument);
  CHECK_THROWS_AS(solve_subproblem(p1, vec({0.0}), 0.0, cfg, vec({0.0})), std::invalid_argument);
}

TEST_CASE("a minimizing reference point is never left") {
  Problem pr;
  pr.name = "bowl";
  pr.n = 1;
  pr.objectives.push_back({{parse_expr("x0^2", 1)}, "f", true});
  auto records = generate_akkt_sequence(pr, vec({0.0}));
  for (const auto& rec : records) {
    CHECK(rec.x[0] == 0.0);
    CHECK(rec.residual == 0.0);
  }
}

TEST_CASE("extract_multipliers examples") {
  const Problem& p1 = builtin("mangasarian").problem;
  ExtractedMultipliers a = extract_multipliers(p1, vec({-0.5}), 4.0, vec({0.0}));
  CHECK(a.mult.mu[0] == 1.0);
  CHECK(a.mult.lambda[0] == 1.0);

  const Problem& p3 = builtin("linear-tradeoff").problem;
  ExtractedMultipliers b = extract_multipliers(p3, vec({0.6, 0.5}), 10.0, vec({0.5, 0.5}));
  CHECK(b.mult.tau[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.branch_signs == std::vector<int>{1});
  ExtractedMultipliers c = extract_multipliers(p3, vec({0.4, 0.5}), 10.0, vec({0.5, 0.5}));
  CHECK(c.branch_signs == std::vector<int>{-1});
  CHECK(c.mult.tau[0] > 0.0);

  ExtractedMultipliers d = extract_multipliers(p3, vec({0.25, 0.75}), 10.0, vec({0.5, 0.5}));
  CHECK(d.mult.tau[0] == 0.0);
  CHECK(d.branch_signs == std::vector<int>{1});
  ExtractedMultipliers e = extract_multipliers(p1, vec({0.0}), 10.0, vec({0.0}));
  CHECK(e.mult.mu[0] == 0.0);
}

TEST_CASE("lambda lives on the active objectives") {
  const Problem& p2 = builtin("abs-biobjective").problem;
  ExtractedMultipliers m = extract_multipliers(p2, vec({0.2}), 1.0, vec({0.5}));
  CHECK(m.mult.lambda[0] == 0.0);
  CHECK(m.mult.lambda[1] == 1.0);
  ExtractedMultipliers k = extract_multipliers(p2, vec({0.5}), 1.0, vec({0.5}));
  CHECK(k.mult.lambda.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k.stationarity <= 1e-15);
}

TEST_CASE("mangasarian sequence to 1e6") {
  const CatalogEntry& e = builtin("mangasarian");
  auto records = generate_akkt_sequence(e.problem, e.candidate, schedule(1.0, 1e6));
  REQUIRE(records.size() == 7);
  for (std::size_t t = 1; t < records.size(); ++t) CHECK(records[t].residual < records[t - 1].residual);
  CHECK(records.back().residual <= 1e-2);
  CHECK(records.back().feasibility.aggregate <= 1e-4);
  for (const auto& rec : records) {
    CHECK(std::abs(rec.x[0] - oracle::mangasarian_penalty_minimizer(rec.k)) <= 1e-8);
  }
}

TEST_CASE("abs-biobjective sequence stays put") {
  const auto& records = corpus_sequence("abs-biobjective");
  for (const auto& rec : records) {
    CHECK(rec.mult.mu.size() == 0);
    CHECK(rec.mult.tau.size() == 0);
    CHECK(rec.residual <= rec.stationarity + 1e-10);
    CHECK(rec.mult.lambda[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("infeasible candidate is rejected") {
  const Problem& p1 = builtin("mangasarian").problem;
  CHECK_THROWS_AS(generate_akkt_sequence(p1, vec({0.5})), std::invalid_argument);
  CHECK_THROWS_AS(generate_akkt_sequence(p1, vec({0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("record invariants across the catalog") {
  for (const auto& e : catalog()) {
    INFO(e.problem.name);
    const auto& records = corpus_sequence(e.problem.name);
    REQUIRE_FALSE(records.empty());
    for (std::size_t t = 0; t < records.size(); ++t) {
      const SequenceRecord& rec = records[t];
      if (t > 0) CHECK(rec.k > records[t - 1].k);
      CHECK_FALSE(rec.flagged);
      CHECK(rec.penalty_value <= 0.0);
      CHECK(rec.mult.lambda.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK((rec.mult.lambda.array() >= 0.0).all());
      CHECK((rec.mult.mu.array() >= 0.0).all());
      CHECK((rec.mult.tau.array() >= 0.0).all());
      PhiValue phi = phi_value(e.problem, rec.x, e.candidate, kDefaultEpsAct);
      for (std::size_t l = 0; l < e.problem.p(); ++l)
        if (std::find(phi.active.active.begin(), phi.active.active.end(), l) == phi.active.active.end())
          CHECK(rec.mult.lambda[l] == 0.0);
      // phi_k <= 0 bounds the squared violation.
      double sq = 0.0;
      for (const auto& g : e.problem.inequalities) sq += std::pow(std::max(g.value(rec.x), 0.0), 2);
      for (const auto& h : e.problem.equalities) sq += std::pow(evaluate(h, rec.x), 2);
      CHECK(sq <= -(2.0 * rec.phi + rec.distance * rec.distance) / rec.k + 1e-15);
      CHECK(rec.residual <= rec.distance + rec.stationarity + 1e-9);
      CHECK(rec.residual <= rec.residual_prime);
      CHECK(rec.distance <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("schedule truncates once the residual is tiny") {
  const auto& p2 = corpus_sequence("abs-biobjective");
  CHECK(p2.size() == 1);
  const auto& p1 = corpus_sequence("mangasarian");
  CHECK(p1.size() == 9);
}

TEST_CASE("CSV export") {
  std::ostringstream out;
  write_sequence_csv(out, corpus_sequence("linear-tradeoff"));
  std::string text = out.str();
  CHECK(text.rfind("k,x,lambda,mu,tau,residual_m,residual_m_prime,feas,phi,e2_max,status\n", 0) == 0);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.rfind("1,0.3333333333333333;0.3333333333333333,", 0) == 0);
  CHECK(line.substr(line.size() - 3) == ",ok");
  std::size_t rows = 0;
  for (std::getline(in, line); in; std::getline(in, line)) ++rows;
  CHECK(rows + 1 == corpus_sequence("linear-tradeoff").size());
}
