// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "akkt/minnorm.hpp"
#include "akkt/problem.hpp"
#include "akkt/subdiff.hpp"

namespace akkt {

/// (lambda, mu, tau) in R^p_+ x R^m_+ x R^r.
struct Multipliers {
  Vector lambda;
  Vector mu;
  Vector tau;

  /// Euclidean norm of the stacked triple.
  double norm() const;
  Multipliers scaled(double c) const;
};

enum class ResidualMode {
  General,  // gamma_j ranges over {grad h_j, -grad h_j}
  Prime,    // gamma_j fixed to grad h_j
};

const char* to_string(ResidualMode mode);
ResidualMode residual_mode_from_string(const std::string& s);

inline constexpr std::size_t kMaxSignBranches = 12;

struct ResidualResult {
  double value = 0.0;
  /// Equality gamma signs of the minimizing branch (all +1 in prime mode).
  std::vector<int> branch_signs;
  /// Chosen subgradients: xi_l for lambda_l > 0, eta_i for mu_i > 0
  /// (zero vectors for vanishing multipliers).
  std::vector<Vector> xi;
  std::vector<Vector> eta;
  Vector point;  // the minimizing combination
};

/// Stationarity residual
///   inf || sum lambda_l xi_l + sum mu_i eta_i + sum tau_j gamma_j ||
/// over xi_l, eta_i in the Clarke hulls at x. Throws std::invalid_argument
/// on size mismatch, negative lambda/mu, an all-zero triple, or r above
/// max_branches in general mode.
ResidualResult residual_m(const Problem& pr, const Vector& x, const Multipliers& mult,
                          double eps_act = kDefaultEpsAct,
                          ResidualMode mode = ResidualMode::General,
                          std::size_t max_branches = kMaxSignBranches);

}  // namespace akkt
