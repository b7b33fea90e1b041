// SPDX-License-Identifier: Apache-2.0

#include "akkt/residual.hpp"

#include <cmath>

namespace akkt {

double Multipliers::norm() const {
  return std::sqrt(lambda.squaredNorm() + mu.squaredNorm() + tau.squaredNorm());
}

Multipliers Multipliers::scaled(double c) const { return {c * lambda, c * mu, c * tau}; }

const char* to_string(ResidualMode mode) {
  return mode == ResidualMode::General ? "general" : "prime";
}

ResidualMode residual_mode_from_string(const std::string& s) {
  if (s == "general") return ResidualMode::General;
  if (s == "prime") return ResidualMode::Prime;
  throw std::invalid_argument("unknown residual mode '" + s + "' (expected general|prime)");
}

namespace {

Vector weighted(const std::vector<Vector>& gens, const std::vector<double>& w) {
  Vector out = Vector::Zero(gens[0].size());
  for (std::size_t i = 0; i < gens.size(); ++i) out += w[i] * gens[i];
  return out;
}

}  // namespace

ResidualResult residual_m(const Problem& pr, const Vector& x, const Multipliers& mult,
                          double eps_act, ResidualMode mode, std::size_t max_branches) {
  if (x.size() != pr.n) throw std::invalid_argument("residual_m: point dimension mismatch");
  if (static_cast<std::size_t>(mult.lambda.size()) != pr.p() ||
      static_cast<std::size_t>(mult.mu.size()) != pr.m() ||
      static_cast<std::size_t>(mult.tau.size()) != pr.r())
    throw std::invalid_argument("residual_m: multiplier dimensions do not match (p, m, r)");
  if ((mult.lambda.array() < 0.0).any() || (mult.mu.array() < 0.0).any())
    throw std::invalid_argument("residual_m: lambda and mu must be nonnegative");
  if (!mult.lambda.allFinite() || !mult.mu.allFinite() || !mult.tau.allFinite())
    throw std::invalid_argument("residual_m: non-finite multipliers");
  if (mult.norm() == 0.0)
    throw std::invalid_argument("residual_m: all multipliers vanish");
  if (mode == ResidualMode::General && pr.r() > max_branches)
    throw std::invalid_argument("residual_m: r = " + std::to_string(pr.r()) +
                                " exceeds the sign-branch cap " + std::to_string(max_branches));

  std::vector<Factor> base;
  std::vector<std::size_t> lambda_factor(pr.p(), SIZE_MAX), mu_factor(pr.m(), SIZE_MAX);
  for (std::size_t l = 0; l < pr.p(); ++l) {
    if (mult.lambda[l] == 0.0) continue;
    lambda_factor[l] = base.size();
    base.push_back({mult.lambda[l], subdifferential(pr.objectives[l], x, eps_act).generators});
  }
  for (std::size_t i = 0; i < pr.m(); ++i) {
    if (mult.mu[i] == 0.0) continue;
    mu_factor[i] = base.size();
    base.push_back({mult.mu[i], subdifferential(pr.inequalities[i], x, eps_act).generators});
  }

  std::vector<Vector> grad_h;
  std::vector<std::size_t> free_signs;  // equalities whose sign matters
  for (std::size_t j = 0; j < pr.r(); ++j) {
    grad_h.push_back(eval_grad(pr.equalities[j], x).gradient);
    if (mult.tau[j] != 0.0) free_signs.push_back(j);
  }

  const std::size_t branches =
      (mode == ResidualMode::General) ? (std::size_t{1} << free_signs.size()) : 1;
  ResidualResult best;
  bool have_best = false;
  MinNormResult best_run;
  for (std::size_t b = 0; b < branches; ++b) {
    std::vector<int> signs(pr.r(), 1);
    if (mode == ResidualMode::General)
      for (std::size_t s = 0; s < free_signs.size(); ++s)
        if (b & (std::size_t{1} << s)) signs[free_signs[s]] = -1;

    std::vector<Factor> factors = base;
    if (!free_signs.empty()) {
      Vector eq = Vector::Zero(pr.n);
      for (std::size_t j = 0; j < pr.r(); ++j) {
        double c = mode == ResidualMode::General ? std::abs(mult.tau[j]) * signs[j] : mult.tau[j];
        eq += c * grad_h[j];
      }
      factors.push_back({1.0, {eq}});
    }
    MinNormResult run = min_norm_point(factors);
    if (!have_best || run.norm < best.value) {
      have_best = true;
      best.value = run.norm;
      best.branch_signs = signs;
      best.point = run.point;
      best_run = std::move(run);
      if (mode == ResidualMode::General) {
        for (std::size_t j = 0; j < pr.r(); ++j)
          if (mult.tau[j] < 0.0) best.branch_signs[j] = -best.branch_signs[j];
      }
    }
  }

  best.xi.assign(pr.p(), Vector::Zero(pr.n));
  best.eta.assign(pr.m(), Vector::Zero(pr.n));
  for (std::size_t l = 0; l < pr.p(); ++l)
    if (lambda_factor[l] != SIZE_MAX)
      best.xi[l] = weighted(base[lambda_factor[l]].generators, best_run.weights[lambda_factor[l]]);
  for (std::size_t i = 0; i < pr.m(); ++i)
    if (mu_factor[i] != SIZE_MAX)
      best.eta[i] = weighted(base[mu_factor[i]].generators, best_run.weights[mu_factor[i]]);
  return best;
}

}  // namespace akkt
