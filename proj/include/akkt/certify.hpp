// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "akkt/penalty.hpp"

namespace akkt {

enum class Outcome { Holds, Fails, Inconclusive };

const char* to_string(Outcome o);

/// One named condition, its outcome, and the numbers that decided it.
struct Verdict {
  std::string name;
  Outcome outcome = Outcome::Inconclusive;
  double tolerance = 0.0;
  std::map<std::string, double> evidence;
  std::string note;

  bool holds() const { return outcome == Outcome::Holds; }
};

struct CertReport {
  std::vector<Verdict> verdicts;

  const Verdict& at(const std::string& name) const;
  const Verdict* find(const std::string& name) const;
  void add(Verdict v) { verdicts.push_back(std::move(v)); }
  void merge(const CertReport& other);
};

/// Finite-sequence reading of "-> 0": the last value is within tol and, over
/// the last kTailLength records, no value exceeds 10x its predecessor.
inline constexpr std::size_t kTailLength = 3;

/// Verdicts A0, A1, A2, A3, E1, E2, SGN, SCZ. A1 uses m in general mode and
/// m' in prime mode. Throws std::invalid_argument on an empty record list.
CertReport check_akkt_conditions(const std::vector<SequenceRecord>& records, const Problem& pr,
                                 const Vector& xbar, double tol,
                                 ResidualMode mode = ResidualMode::General);

struct KktCheck {
  bool holds = false;
  Multipliers best;  // sum lambda = 1, tau signed
  double residual = 0.0;
  double multiplier_cap = 0.0;  // cap of the decade that attained the residual
};

/// min || sum lambda xi + sum mu eta + sum tau gamma || at xbar over lambda in
/// the unit simplex, mu >= 0 on eps-active inequalities, tau free, each
/// multiplier magnitude capped at 1/tol.
KktCheck check_kkt(const Problem& pr, const Vector& xbar, double eps_act = kDefaultEpsAct,
                   double tol = 1e-6);

struct KktRecovery {
  Outcome outcome = Outcome::Inconclusive;  // Holds = KKT recovered
  Multipliers limit;                        // tail average of records / delta_k
  double residual = 0.0;          // stationarity at xbar, divided by sum(limit.lambda)
  double tail_spread = 0.0;       // max pairwise distance in the normalized tail
  double final_lambda = 0.0;      // sum of normalized lambda at the last record
  std::string note;
};

inline constexpr double kTailSpreadTol = 1e-3;

KktRecovery kkt_from_akkt(const std::vector<SequenceRecord>& records, const Problem& pr,
                          const Vector& xbar, double eps_act = kDefaultEpsAct,
                          double tol = 1e-6);

struct QncqCheck {
  Outcome outcome = Outcome::Inconclusive;  // never Fails
  double min_norm = 0.0;
  std::size_t generators = 0;
  /// Sampled balls (out of 10 radii) containing a point with the sign
  /// pattern of condition (iii) for the vanishing combination.
  std::size_t radii_witnessed = 0;
  std::size_t radii_sampled = 0;
  std::string note;
};

QncqCheck check_qncq_sufficient(const Problem& pr, const Vector& xbar,
                                double eps_act = kDefaultEpsAct, double tol = 1e-6,
                                std::uint64_t seed = 1);

struct ConvexCertificate {
  bool certified = false;
  double scalarized_value = 0.0;  // sum lambda_l f_l(xbar), lambda from the last record
  std::size_t convexity_pairs = 0;
  CertReport conditions;          // AKKT' verdicts and SCZ
  std::string note;
};

/// Thrown when a convexity or affinity hypothesis of the certifier is missing or
/// disproved by sampling.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ConvexCertificate certify_weak_efficiency_convex(const Problem& pr, const Vector& xbar,
                                                 const std::vector<SequenceRecord>& records,
                                                 double tol, std::uint64_t seed = 1);

struct Grid {
  Vector lower;
  Vector upper;
  double step = 1e-3;
};

struct OracleResult {
  bool weakly_efficient = true;
  std::optional<Vector> counterexample;
  std::size_t points = 0;
  std::size_t feasible_points = 0;
};

/// Brute-force scan: a counterexample is a grid point with violation <= 1e-8
/// and f_l(x) < f_l(xbar) - 1e-9 for every l. Requires n <= 3.
OracleResult weak_efficiency_oracle(const Problem& pr, const Vector& xbar, const Grid& grid);

}  // namespace akkt
