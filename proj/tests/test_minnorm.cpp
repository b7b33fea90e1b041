// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "akkt/minnorm.hpp"
#include "support/oracles.hpp"

using namespace akkt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

std::vector<Factor> random_instance(oracle::Rng& rng) {
  const int d = rng.integer(1, 3);
  const int F = rng.integer(1, 3);
  std::vector<Factor> fs;
  for (int f = 0; f < F; ++f) {
    Factor fac;
    fac.scale = rng.uniform(0.2, 2.0);
    const int G = rng.integer(1, 5);
    for (int g = 0; g < G; ++g) fac.generators.push_back(rng.vector(d, -1.0, 1.0));
    fs.push_back(std::move(fac));
  }
  return fs;
}

Vector reconstruct(const std::vector<Factor>& fs, const MinNormResult& r) {
  Vector p = Vector::Zero(fs[0].generators[0].size());
  for (std::size_t f = 0; f < fs.size(); ++f)
    for (std::size_t i = 0; i < fs[f].generators.size(); ++i)
      p += fs[f].scale * r.weights[f][i] * fs[f].generators[i];
  return p;
}

}  // namespace

TEST_CASE("singleton polytope") {
  std::vector<Factor> fs{{1.0, {vec({3.0, 4.0})}}};
  MinNormResult r = min_norm_point(fs);
  CHECK(r.norm == 5.0);
  CHECK(r.point == vec({3.0, 4.0}));
}

TEST_CASE("horizontal segment at height one") {
  std::vector<Factor> fs{{1.0, {vec({-1.0, 1.0}), vec({1.0, 1.0})}}};
  MinNormResult r = min_norm_point(fs);
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.point[0]) <= 1e-12);
  CHECK(r.weights[0][0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(oracle::min_norm_by_grid(fs, 1000) - r.norm) <= 1e-6);
}

TEST_CASE("Minkowski sum containing the origin") {
  std::vector<Factor> fs{{1.0, {vec({1.0, 0.0})}}, {1.0, {vec({-1.0, 0.0})}}};
  CHECK(min_norm_point(fs).norm == 0.0);
}

TEST_CASE("invalid inputs") {
  std::vector<Factor> none;
  CHECK_THROWS_AS(min_norm_point(none), std::invalid_argument);
  std::vector<Factor> empty{{1.0, {}}};
  CHECK_THROWS_AS(min_norm_point(empty), std::invalid_argument);
  std::vector<Factor> negative{{-1.0, {vec({1.0})}}};
  CHECK_THROWS_AS(min_norm_point(negative), std::invalid_argument);
  std::vector<Factor> mixed{{1.0, {vec({1.0})}}, {1.0, {vec({1.0, 2.0})}}};
  CHECK_THROWS_AS(min_norm_point(mixed), std::invalid_argument);
}

TEST_CASE("iteration cap without a certificate is a numerical error") {
  std::vector<Factor> fs{{1.0, {vec({1.0, 0.2}), vec({-1.0, 0.3}), vec({0.1, -1.0}), vec({0.4, 0.9})}}};
  MinNormOptions opts;
  opts.max_iterations = 1;
  CHECK_THROWS_AS(min_norm_point(fs, opts), NumericalError);
}

TEST_CASE("random instances: weights, certificate, exact oracle") {
  oracle::Rng rng(101);
  for (int t = 0; t < 200; ++t) {
    std::vector<Factor> fs = random_instance(rng);
    MinNormResult r = min_norm_point(fs);
    for (std::size_t f = 0; f < fs.size(); ++f) {
      double s = 0.0;
      for (double w : r.weights[f]) {
        CHECK(w >= 0.0);
        s += w;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK((reconstruct(fs, r) - r.point).norm() <= 1e-9);
    CHECK(r.norm == doctest::Approx(r.point.norm()).epsilon(1e-15));
    // Wolfe certificate against every vertex of the sum: <p, p - v> <= tol.
    double gap = 0.0;
    for (std::size_t f = 0; f < fs.size(); ++f) {
      Vector contrib = Vector::Zero(r.point.size());
      double lmo = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < fs[f].generators.size(); ++i) {
        contrib += fs[f].scale * r.weights[f][i] * fs[f].generators[i];
        lmo = std::min(lmo, fs[f].scale * r.point.dot(fs[f].generators[i]));
      }
      gap += r.point.dot(contrib) - lmo;
    }
    CHECK(gap <= 1e-9);
    CHECK(std::abs(oracle::min_norm_by_supports(fs) - r.norm) <= 1e-9);
  }
}

TEST_CASE("deterministic tie breaking") {
  std::vector<Factor> fs{{1.0, {vec({1.0, 1.0}), vec({-1.0, 1.0}), vec({1.0, 1.0})}}};
  MinNormResult a = min_norm_point(fs);
  MinNormResult b = min_norm_point(fs);
  CHECK(a.weights == b.weights);
  CHECK(a.point == b.point);
  CHECK(a.weights[0][2] == 0.0);
}

TEST_CASE("positive homogeneity in the scales") {
  oracle::Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    std::vector<Factor> fs = random_instance(rng);
    double c = rng.uniform(0.1, 10.0);
    std::vector<Factor> scaled = fs;
    for (auto& f : scaled) f.scale *= c;
    CHECK(min_norm_point(scaled).norm == doctest::Approx(c * min_norm_point(fs).norm).epsilon(1e-9));
  }
}
