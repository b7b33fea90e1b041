// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "akkt/residual.hpp"

namespace akkt {

/// Geometric schedule first, first*10, ... up to and including last.
std::vector<double> geometric_schedule(double first, double last);

struct PenaltyConfig {
  double delta = 1.0;                                  // radius of B(xbar, delta)
  std::vector<double> schedule = geometric_schedule(1.0, 1e8);
  std::size_t max_iterations = 5000;                   // subgradient steps per k
  double step_scale = 0.0;                             // c in c/sqrt(t); 0 selects delta/10
  std::size_t polish_iterations = 4000;                // descent steps after the subgradient phase
  double stationarity_tol = 1e-10;
  double eps_act = kDefaultEpsAct;
  double truncate_residual = 1e-8;                     // stop the schedule once m < this

  void validate() const;
};

struct SubproblemResult {
  Vector x;
  double value = 0.0;        // phi_k(x)
  double stationarity = 0.0; // min-norm of the assembled subgradient model at x
  bool beats_reference = false;  // phi_k(x) <= phi_k(xbar) = 0
  std::size_t iterations = 0;
  bool flagged = false;
  std::string status;
};

/// phi_k(x) = phi(x) + k/2 [sum max(g_i,0)^2 + sum h_j^2] + 1/2 |x - xbar|^2.
double penalty_objective(const Problem& pr, const Vector& x, const Vector& xbar, double k);

/// Approximate minimizer of phi_k over B(xbar, delta): projected subgradient
/// steps c/sqrt(t) followed by a descent polish along minus the min-norm
/// element of the eps-active subgradient model. The returned point never has
/// a larger phi_k than the better of x_init and xbar.
SubproblemResult solve_subproblem(const Problem& pr, const Vector& xbar, double k,
                                  const PenaltyConfig& cfg, const Vector& x_init);

struct ExtractedMultipliers {
  Multipliers mult;              // tau_j = k |h_j| >= 0
  std::vector<int> branch_signs; // sign(h_j(x)), 0 counted as +
  double stationarity = 0.0;     // |sum lambda xi + sum mu eta + sum tau sigma grad h + (x - xbar)|
};

/// mu_i = k max(g_i,0), tau_j = k|h_j|; lambda minimizes the full
/// stationarity sum (proximal term included) over the activity simplex.
ExtractedMultipliers extract_multipliers(const Problem& pr, const Vector& xk, double k,
                                         const Vector& xbar,
                                         double eps_act = kDefaultEpsAct);

struct SequenceRecord {
  double k = 0.0;
  Vector x;
  Multipliers mult;               // A2-normalized lambda, tau >= 0
  std::vector<int> branch_signs;  // sigma_j
  double residual = 0.0;          // m (general mode)
  double residual_prime = 0.0;    // m' (gamma_j = sigma_j grad h_j)
  FeasibilityReport feasibility;
  double phi = 0.0;
  double penalty_value = 0.0;     // phi_k(x^k)
  std::vector<double> e2;         // per objective
  double stationarity = 0.0;      // inner stationarity estimate
  double distance = 0.0;          // |x^k - xbar|
  std::size_t iterations = 0;
  bool flagged = false;
  std::string status;

  /// (lambda, mu, sigma * tau): tau with the branch sign folded in.
  Multipliers signed_multipliers() const;
  double e2_max() const;
  /// sum mu_i g_i(x^k) + sum tau_j sigma_j h_j(x^k)
  double complementarity_sum(const Problem& pr) const;
};

/// Runs the penalty schedule from xbar, warm-starting each k from the
/// previous iterate. Throws std::invalid_argument if xbar is not feasible
/// within 1e-8.
std::vector<SequenceRecord> generate_akkt_sequence(const Problem& pr, const Vector& xbar,
                                                   const PenaltyConfig& cfg = {});

/// Columns: k, x, lambda, mu, tau, residual_m, residual_m_prime, feas, phi,
/// e2_max, status. Vectors are semicolon-joined.
void write_sequence_csv(std::ostream& out, const std::vector<SequenceRecord>& records);

}  // namespace akkt
