// SPDX-License-Identifier: Apache-2.0

#include "akkt/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace akkt {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const Verdict* CertReport::find(const std::string& name) const {
  for (const auto& v : verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

const Verdict& CertReport::at(const std::string& name) const {
  if (const Verdict* v = find(name)) return *v;
  throw std::out_of_range("no verdict named '" + name + "'");
}

void CertReport::merge(const CertReport& other) {
  verdicts.insert(verdicts.end(), other.verdicts.begin(), other.verdicts.end());
}

namespace {

Outcome of(bool b) { return b ? Outcome::Holds : Outcome::Fails; }

struct TailCheck {
  bool ok = false;
  double last = 0.0;
  double worst_ratio = 0.0;  // max d_t / d_{t-1} over the tail, 0 if undefined
};

// Last value within tol and no tail step growing by more than 10x.
TailCheck tail_check(const std::vector<double>& values, double tol) {
  TailCheck out;
  out.last = values.back();
  bool trend = true;
  std::size_t start = values.size() > kTailLength ? values.size() - kTailLength : 0;
  for (std::size_t t = start + 1; t < values.size(); ++t) {
    if (values[t] > 10.0 * values[t - 1] + 1e-12) trend = false;
    if (values[t - 1] > 0.0) out.worst_ratio = std::max(out.worst_ratio, values[t] / values[t - 1]);
  }
  out.ok = trend && out.last <= tol;
  return out;
}

Verdict tail_verdict(const std::string& name, const std::vector<double>& values, double tol) {
  TailCheck c = tail_check(values, tol);
  Verdict v{name, of(c.ok), tol, {{"last", c.last}, {"worst_tail_ratio", c.worst_ratio}}, ""};
  if (!c.ok) v.note = c.last > tol ? "last value exceeds tolerance" : "tail grows by more than 10x";
  return v;
}

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector sample_box(std::mt19937_64& rng, const Vector& center, double radius) {
  Vector x(center.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x[i] = center[i] + radius * (2.0 * uniform01(rng) - 1.0);
  return x;
}

void require_feasible(const Problem& pr, const Vector& xbar, double tol, const char* who) {
  if (xbar.size() != pr.n)
    throw std::invalid_argument(std::string(who) + ": point dimension does not match the problem");
  double viol = feasibility_violation(pr, xbar).aggregate;
  if (!(viol <= tol))
    throw std::invalid_argument(std::string(who) + ": candidate is infeasible (violation " +
                                std::to_string(viol) + ")");
}

}  // namespace

CertReport check_akkt_conditions(const std::vector<SequenceRecord>& records, const Problem& pr,
                                 const Vector& xbar, double tol, ResidualMode mode) {
  if (records.empty()) throw std::invalid_argument("check_akkt_conditions: no records");
  const std::size_t N = records.size();
  const std::size_t tail_start = N > kTailLength ? N - kTailLength : 0;
  CertReport rep;

  std::vector<double> dist, resid, scz;
  for (const auto& rec : records) {
    dist.push_back((rec.x - xbar).norm());
    Multipliers s = rec.signed_multipliers();
    double m = 0.0;
    if (s.norm() == 0.0) {
      m = std::numeric_limits<double>::infinity();
    } else {
      m = residual_m(pr, rec.x, s, kDefaultEpsAct, mode).value;
    }
    resid.push_back(m);
    scz.push_back(std::abs(rec.complementarity_sum(pr)));
  }

  rep.add(tail_verdict("A0", dist, tol));
  {
    Verdict v = tail_verdict("A1", resid, tol);
    v.note += std::string(v.note.empty() ? "" : "; ") + "residual mode " + to_string(mode);
    rep.add(std::move(v));
  }

  {
    double worst = 0.0;
    bool nonneg = true;
    for (const auto& rec : records) {
      worst = std::max(worst, std::abs(rec.mult.lambda.sum() - 1.0));
      if ((rec.mult.lambda.array() < 0.0).any()) nonneg = false;
    }
    Verdict v{"A2", of(nonneg && worst <= 1e-12), 1e-12, {{"max_sum_deviation", worst}}, ""};
    if (!nonneg) v.note = "negative lambda component";
    rep.add(std::move(v));
  }

  {
    double worst = 0.0;
    double inactive = 0.0;
    for (std::size_t i = 0; i < pr.m(); ++i) {
      if (!(pr.inequalities[i].value(xbar) < -tol)) continue;
      inactive += 1.0;
      for (std::size_t t = tail_start; t < N; ++t) worst = std::max(worst, records[t].mult.mu[i]);
    }
    Verdict v{"A3", of(worst == 0.0), tol, {{"inactive_constraints", inactive}, {"max_mu_on_inactive", worst}}, ""};
    if (worst != 0.0) v.note = "positive mu on a constraint inactive at the candidate";
    rep.add(std::move(v));
  }

  {
    bool ok = true;
    double worst = 0.0;
    for (const auto& rec : records) {
      for (std::size_t i = 0; i < pr.m(); ++i) {
        double want = rec.k * std::max(pr.inequalities[i].value(rec.x), 0.0);
        double got = rec.mult.mu[i];
        if (!close_rel(got, want, 1e-12)) ok = false;
        worst = std::max(worst, std::abs(got - want));
      }
      for (std::size_t j = 0; j < pr.r(); ++j) {
        double want = rec.k * evaluate(pr.equalities[j], rec.x);
        double sign = (j < rec.branch_signs.size() && rec.branch_signs[j] < 0) ? -1.0 : 1.0;
        double got = sign * rec.mult.tau[j];
        if (rec.mult.tau[j] < 0.0 || !close_rel(got, want, 1e-12)) ok = false;
        worst = std::max(worst, std::abs(got - want));
      }
    }
    rep.add({"E1", of(ok), 1e-12, {{"max_abs_deviation", worst}}, "relative tolerance, b_k = c_k = k"});
  }

  {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& rec : records) {
      double half = 0.5 * rec.complementarity_sum(pr);
      for (std::size_t l = 0; l < pr.p(); ++l)
        worst = std::max(worst, pr.objectives[l].value(rec.x) - pr.objectives[l].value(xbar) + half);
    }
    rep.add({"E2", of(worst <= tol), tol, {{"max_lhs", worst}}, ""});
  }

  {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& rec : records) {
      Multipliers s = rec.signed_multipliers();
      for (std::size_t i = 0; i < pr.m(); ++i)
        worst = std::min(worst, s.mu[i] * pr.inequalities[i].value(rec.x));
      for (std::size_t j = 0; j < pr.r(); ++j)
        worst = std::min(worst, s.tau[j] * evaluate(pr.equalities[j], rec.x));
    }
    if (pr.m() + pr.r() == 0) worst = 0.0;
    rep.add({"SGN", of(worst >= -tol), tol, {{"min_product", worst}}, ""});
  }

  rep.add(tail_verdict("SCZ", scz, tol));
  return rep;
}

namespace {

// Exact minimum over the box mu_i in [0, C], tau_j in [-C, C]:
// {mu eta : mu in [0, C], eta in conv G} = conv({0} u C G).
KktCheck kkt_at_cap(const Problem& pr, const Vector& xbar, double eps_act, double C) {
  std::vector<Factor> factors;
  Factor obj;
  std::vector<std::size_t> owner;
  for (std::size_t l = 0; l < pr.p(); ++l) {
    for (const Vector& gvec : subdifferential(pr.objectives[l], xbar, eps_act).generators) {
      obj.generators.push_back(gvec);
      owner.push_back(l);
    }
  }
  factors.push_back(std::move(obj));

  std::vector<std::size_t> ineq_factor(pr.m(), SIZE_MAX);
  for (std::size_t i = 0; i < pr.m(); ++i) {
    if (pr.inequalities[i].value(xbar) < -eps_act) continue;
    Factor f;
    f.generators.push_back(Vector::Zero(pr.n));
    for (const Vector& gvec : subdifferential(pr.inequalities[i], xbar, eps_act).generators)
      f.generators.push_back(C * gvec);
    ineq_factor[i] = factors.size();
    factors.push_back(std::move(f));
  }
  std::vector<std::size_t> eq_factor(pr.r());
  for (std::size_t j = 0; j < pr.r(); ++j) {
    Vector gh = eval_grad(pr.equalities[j], xbar).gradient;
    eq_factor[j] = factors.size();
    factors.push_back({1.0, {C * gh, -C * gh}});
  }

  MinNormResult run = min_norm_point(factors);
  KktCheck out;
  out.multiplier_cap = C;
  out.residual = run.norm;
  out.best.lambda = Vector::Zero(pr.p());
  out.best.mu = Vector::Zero(pr.m());
  out.best.tau = Vector::Zero(pr.r());
  for (std::size_t g = 0; g < owner.size(); ++g) out.best.lambda[owner[g]] += run.weights[0][g];
  for (std::size_t i = 0; i < pr.m(); ++i) {
    if (ineq_factor[i] == SIZE_MAX) continue;
    const auto& w = run.weights[ineq_factor[i]];
    double mass = 0.0;
    for (std::size_t g = 1; g < w.size(); ++g) mass += w[g];
    out.best.mu[i] = C * mass;
  }
  for (std::size_t j = 0; j < pr.r(); ++j) {
    const auto& w = run.weights[eq_factor[j]];
    out.best.tau[j] = C * (w[0] - w[1]);
  }
  return out;
}

}  // namespace

KktCheck check_kkt(const Problem& pr, const Vector& xbar, double eps_act, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("check_kkt: tol must be positive");
  require_feasible(pr, xbar, tol, "check_kkt");
  // Caps 1, 10, ... up to 1/tol. Large caps inflate the generators and with
  // them the rounding error of the min-norm point, so the smallest
  // sufficient cap gives the sharpest residual.
  const double cap = 1.0 / tol;
  KktCheck best;
  bool have = false;
  for (double C = std::min(1.0, cap);; C = std::min(10.0 * C, cap)) {
    KktCheck run = kkt_at_cap(pr, xbar, eps_act, C);
    if (!have || run.residual < best.residual) {
      best = std::move(run);
      have = true;
    }
    if (C >= cap) break;
  }
  best.holds = best.residual <= tol;
  return best;
}

KktRecovery kkt_from_akkt(const std::vector<SequenceRecord>& records, const Problem& pr,
                          const Vector& xbar, double eps_act, double tol) {
  if (records.empty()) throw std::invalid_argument("kkt_from_akkt: no records");
  const std::size_t N = records.size();
  const std::size_t start = N > kTailLength ? N - kTailLength : 0;

  auto stack = [](const Multipliers& m) {
    Vector v(m.lambda.size() + m.mu.size() + m.tau.size());
    v << m.lambda, m.mu, m.tau;
    return v;
  };

  std::vector<Multipliers> tail;
  for (std::size_t t = start; t < N; ++t) {
    Multipliers s = records[t].signed_multipliers();
    double delta = s.norm();
    if (delta == 0.0) throw std::invalid_argument("kkt_from_akkt: record with all-zero multipliers");
    tail.push_back(s.scaled(1.0 / delta));
  }

  KktRecovery out;
  out.final_lambda = tail.back().lambda.sum();
  for (std::size_t a = 0; a < tail.size(); ++a)
    for (std::size_t b = a + 1; b < tail.size(); ++b)
      out.tail_spread = std::max(out.tail_spread, (stack(tail[a]) - stack(tail[b])).norm());

  out.limit = tail.back().scaled(0.0);
  for (const auto& m : tail) {
    out.limit.lambda += m.lambda;
    out.limit.mu += m.mu;
    out.limit.tau += m.tau;
  }
  out.limit = out.limit.scaled(1.0 / static_cast<double>(tail.size()));

  double raw = residual_m(pr, xbar, out.limit, eps_act, ResidualMode::General).value;
  double lam = out.limit.lambda.sum();
  out.residual = lam > 0.0 ? raw / lam : raw;

  if (out.tail_spread > kTailSpreadTol) {
    out.outcome = Outcome::Inconclusive;
    out.note = "KKT not recovered: normalized multiplier tail has not converged";
  } else if (lam <= tol) {
    out.outcome = Outcome::Fails;
    out.note = "KKT not recovered: normalized lambda vanishes in the limit";
  } else if (out.residual > tol) {
    out.outcome = Outcome::Fails;
    out.note = "KKT not recovered: limit multipliers leave a stationarity residual";
  } else {
    out.outcome = Outcome::Holds;
    out.note = "KKT recovered";
  }
  return out;
}

QncqCheck check_qncq_sufficient(const Problem& pr, const Vector& xbar, double eps_act,
                                double tol, std::uint64_t seed) {
  require_feasible(pr, xbar, tol, "check_qncq_sufficient");
  Factor all;
  std::vector<std::size_t> owner;  // < m: inequality i; otherwise 2*j + sign bit offset by m
  for (std::size_t i = 0; i < pr.m(); ++i) {
    if (pr.inequalities[i].value(xbar) < -eps_act) continue;
    for (const Vector& gvec : subdifferential(pr.inequalities[i], xbar, eps_act).generators) {
      all.generators.push_back(gvec);
      owner.push_back(i);
    }
  }
  for (std::size_t j = 0; j < pr.r(); ++j) {
    Vector gh = eval_grad(pr.equalities[j], xbar).gradient;
    all.generators.push_back(gh);
    owner.push_back(pr.m() + 2 * j);
    all.generators.push_back(-gh);
    owner.push_back(pr.m() + 2 * j + 1);
  }

  QncqCheck out;
  out.generators = all.generators.size();
  if (all.generators.empty()) {
    out.outcome = Outcome::Holds;
    out.note = "no active constraints: holds vacuously";
    return out;
  }
  std::vector<Factor> factors{all};
  MinNormResult run = min_norm_point(factors);
  out.min_norm = run.norm;
  if (run.norm > tol) {
    out.outcome = Outcome::Holds;
    out.note = "active constraint generators are positively linearly independent";
    return out;
  }

  // Support of the vanishing combination, used to probe condition (iii).
  std::vector<double> mu(pr.m(), 0.0), tau(pr.r(), 0.0);
  for (std::size_t g = 0; g < owner.size(); ++g) {
    double w = run.weights[0][g];
    if (owner[g] < pr.m()) {
      mu[owner[g]] += w;
    } else {
      std::size_t k = owner[g] - pr.m();
      tau[k / 2] += (k % 2 == 0) ? w : -w;
    }
  }
  constexpr double kSupport = 1e-12;
  std::vector<std::size_t> S, T;
  for (std::size_t i = 0; i < pr.m(); ++i)
    if (mu[i] > kSupport) S.push_back(i);
  for (std::size_t j = 0; j < pr.r(); ++j)
    if (std::abs(tau[j]) > kSupport) T.push_back(j);

  out.outcome = Outcome::Inconclusive;
  if (S.empty() && T.empty()) {
    out.note = "vanishing combination pairs +grad h and -grad h; sufficient check cannot decide";
    return out;
  }

  std::mt19937_64 rng(seed);
  constexpr int kRadii = 10;
  constexpr int kPointsPerRadius = 100;
  out.radii_sampled = kRadii;
  for (int e = 1; e <= kRadii; ++e) {
    double radius = std::pow(10.0, -e);
    bool witnessed = false;
    for (int s = 0; s < kPointsPerRadius; ++s) {
      Vector x = sample_box(rng, xbar, radius);
      if (witnessed) continue;  // keep the stream length fixed
      try {
        bool ok = true;
        for (std::size_t i : S) ok = ok && pr.inequalities[i].value(x) > 0.0;
        for (std::size_t j : T) ok = ok && tau[j] * evaluate(pr.equalities[j], x) > 0.0;
        witnessed = ok;
      } catch (const DomainError&) {
      }
    }
    if (witnessed) ++out.radii_witnessed;
  }
  out.note = "nonzero abnormal combination exists; sampled sign pattern found in " +
             std::to_string(out.radii_witnessed) + " of " + std::to_string(kRadii) + " balls";
  return out;
}

ConvexCertificate certify_weak_efficiency_convex(const Problem& pr, const Vector& xbar,
                                                 const std::vector<SequenceRecord>& records,
                                                 double tol, std::uint64_t seed) {
  for (const auto& f : pr.objectives)
    if (!f.convex) throw HypothesisError("objective '" + f.label + "' is not asserted convex");
  for (const auto& g : pr.inequalities)
    if (!g.convex) throw HypothesisError("inequality '" + g.label + "' is not asserted convex");
  if (records.empty()) throw std::invalid_argument("certify_weak_efficiency_convex: no records");
  if (xbar.size() != pr.n) throw std::invalid_argument("certify_weak_efficiency_convex: dimension mismatch");

  constexpr double kBox = 2.0;
  std::mt19937_64 rng(seed);
  for (std::size_t j = 0; j < pr.r(); ++j) {
    Vector g0 = eval_grad(pr.equalities[j], xbar).gradient;
    for (int s = 0; s < 10; ++s) {
      Vector x = sample_box(rng, xbar, kBox);
      Vector g = eval_grad(pr.equalities[j], x).gradient;
      if ((g - g0).lpNorm<Eigen::Infinity>() > 1e-9)
        throw HypothesisError("equality " + std::to_string(j) + " is not affine: gradient varies");
    }
  }

  ConvexCertificate out;
  auto spot_check = [&](const PiecewiseMaxFn& fn, const std::string& what) {
    for (int s = 0; s < 200; ++s) {
      Vector u = sample_box(rng, xbar, kBox);
      Vector v = sample_box(rng, xbar, kBox);
      try {
        auto [piece, fu] = fn.argmax(u);
        Vector sg = eval_grad(fn.pieces[piece], u).gradient;
        double fv = fn.value(v);
        ++out.convexity_pairs;
        if (fv < fu + sg.dot(v - u) - 1e-8) {
          std::string msg = what + " '" + fn.label + "' violates the subgradient inequality at u = (";
          for (Eigen::Index i = 0; i < u.size(); ++i) msg += (i ? ", " : "") + std::to_string(u[i]);
          msg += "), v = (";
          for (Eigen::Index i = 0; i < v.size(); ++i) msg += (i ? ", " : "") + std::to_string(v[i]);
          throw HypothesisError(msg + ")");
        }
      } catch (const DomainError&) {
      }
    }
  };
  for (const auto& f : pr.objectives) spot_check(f, "objective");
  for (const auto& g : pr.inequalities) spot_check(g, "inequality");

  CertReport full = check_akkt_conditions(records, pr, xbar, tol, ResidualMode::Prime);
  bool ok = true;
  for (const char* name : {"A0", "A1", "A2", "A3", "SCZ"}) {
    out.conditions.add(full.at(name));
    ok = ok && full.at(name).holds();
  }
  const Vector& lam = records.back().mult.lambda;
  for (std::size_t l = 0; l < pr.p(); ++l) out.scalarized_value += lam[l] * pr.objectives[l].value(xbar);
  out.certified = ok;
  out.note = ok ? "AKKT' and SCZ hold under convexity" : "AKKT' or SCZ not satisfied by the records";
  return out;
}

OracleResult weak_efficiency_oracle(const Problem& pr, const Vector& xbar, const Grid& grid) {
  if (pr.n > 3) throw std::invalid_argument("weak_efficiency_oracle: n > 3");
  if (grid.lower.size() != pr.n || grid.upper.size() != pr.n || xbar.size() != pr.n)
    throw std::invalid_argument("weak_efficiency_oracle: dimension mismatch");
  if (!(grid.step > 0.0)) throw std::invalid_argument("weak_efficiency_oracle: step must be positive");
  if ((xbar.array() < grid.lower.array()).any() || (xbar.array() > grid.upper.array()).any())
    throw std::invalid_argument("weak_efficiency_oracle: grid box does not contain the candidate");

  std::vector<std::size_t> count(pr.n);
  double total = 1.0;
  for (int i = 0; i < pr.n; ++i) {
    count[i] = static_cast<std::size_t>(std::floor((grid.upper[i] - grid.lower[i]) / grid.step + 1e-9)) + 1;
    total *= static_cast<double>(count[i]);
  }
  if (total > 1e8) throw std::invalid_argument("weak_efficiency_oracle: grid exceeds 1e8 points");

  std::vector<double> ref(pr.p());
  for (std::size_t l = 0; l < pr.p(); ++l) ref[l] = pr.objectives[l].value(xbar);

  OracleResult out;
  std::vector<std::size_t> idx(pr.n, 0);
  Vector x(pr.n);
  while (true) {
    for (int i = 0; i < pr.n; ++i) x[i] = grid.lower[i] + static_cast<double>(idx[i]) * grid.step;
    ++out.points;
    try {
      if (feasibility_violation(pr, x).aggregate <= 1e-8) {
        ++out.feasible_points;
        bool dominates = true;
        for (std::size_t l = 0; l < pr.p() && dominates; ++l)
          dominates = pr.objectives[l].value(x) < ref[l] - 1e-9;
        if (dominates) {
          out.weakly_efficient = false;
          out.counterexample = x;
          return out;
        }
      }
    } catch (const DomainError&) {
    }
    int d = 0;
    while (d < pr.n && ++idx[d] == count[d]) idx[d++] = 0;
    if (d == pr.n) break;
  }
  return out;
}

}  // namespace akkt
