// SPDX-License-Identifier: Apache-2.0

#include "akkt/penalty.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace akkt {

std::vector<double> geometric_schedule(double first, double last) {
  if (!(first > 0.0) || !(last >= first))
    throw std::invalid_argument("geometric schedule needs 0 < first <= last");
  std::vector<double> out;
  for (int t = 0;; ++t) {
    double k = first * std::pow(10.0, t);
    if (k > last * (1.0 + 1e-12)) break;
    out.push_back(k);
  }
  return out;
}

void PenaltyConfig::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (schedule.empty()) throw std::invalid_argument("penalty schedule is empty");
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    if (!(schedule[t] > 0.0) || !std::isfinite(schedule[t]))
      throw std::invalid_argument("penalty weights must be positive and finite");
    if (t > 0 && !(schedule[t] > schedule[t - 1]))
      throw std::invalid_argument("penalty schedule must be strictly increasing");
  }
  if (!(eps_act >= 0.0)) throw std::invalid_argument("eps_act must be >= 0");
  if (step_scale < 0.0) throw std::invalid_argument("step scale must be >= 0");
}

double penalty_objective(const Problem& pr, const Vector& x, const Vector& xbar, double k) {
  double phi = phi_value(pr, x, xbar, 0.0).value;
  double pen = 0.0;
  for (const auto& g : pr.inequalities) {
    double v = std::max(g.value(x), 0.0);
    pen += v * v;
  }
  for (const auto& h : pr.equalities) {
    double v = evaluate(h, x);
    pen += v * v;
  }
  double value = phi + 0.5 * k * pen + 0.5 * (x - xbar).squaredNorm();
  if (!std::isfinite(value)) throw DomainError("non-finite penalty value", pr.name);
  return value;
}

namespace {

/// Clarke-hull model of the subdifferential of phi_k at x, built from the
/// eps-active pieces: conv(objective gradients) + sum_i k g_i^+ conv(grad g_i)
/// + {sum_j k h_j grad h_j + (x - xbar)}.
struct Model {
  std::vector<Factor> factors;
  std::vector<std::size_t> objective_of;  // owner of each generator of factor 0
};

Model assemble_model(const Problem& pr, const Vector& x, const Vector& xbar, double k,
                     double eps) {
  Model model;
  PhiValue phi = phi_value(pr, x, xbar, eps);
  Factor objectives{1.0, {}};
  for (std::size_t l : phi.active.active) {
    for (auto& g : subdifferential(pr.objectives[l], x, eps).generators) {
      objectives.generators.push_back(std::move(g));
      model.objective_of.push_back(l);
    }
  }
  model.factors.push_back(std::move(objectives));
  for (const auto& g : pr.inequalities) {
    double v = g.value(x);
    if (v > 0.0) model.factors.push_back({k * v, subdifferential(g, x, eps).generators});
  }
  Vector fixed = x - xbar;
  for (const auto& h : pr.equalities) {
    ValueGrad vg = eval_grad(h, x);
    fixed += (k * vg.value) * vg.gradient;
  }
  model.factors.push_back({1.0, {fixed}});
  return model;
}

/// One element of the subdifferential of phi_k: first maximizing objective,
/// first maximizing piece of each function.
Vector subgradient(const Problem& pr, const Vector& x, const Vector& xbar, double k) {
  PhiValue phi = phi_value(pr, x, xbar, 0.0);
  std::size_t lead = phi.active.active.front();
  const auto& f = pr.objectives[lead];
  Vector g = eval_grad(f.pieces[f.argmax(x).first], x).gradient;
  for (const auto& c : pr.inequalities) {
    auto [piece, value] = c.argmax(x);
    if (value > 0.0) g += (k * value) * eval_grad(c.pieces[piece], x).gradient;
  }
  for (const auto& h : pr.equalities) {
    ValueGrad vg = eval_grad(h, x);
    g += (k * vg.value) * vg.gradient;
  }
  g += x - xbar;
  return g;
}

class BallProjection {
 public:
  BallProjection(const Vector& center, double radius) : center_(center), radius_(radius) {}
  Vector operator()(Vector y) const {
    Vector d = y - center_;
    double nd = d.norm();
    if (nd > radius_) y = center_ + d * (radius_ / nd);
    return y;
  }

 private:
  const Vector& center_;
  double radius_;
};

double safe_objective(const Problem& pr, const Vector& x, const Vector& xbar, double k) {
  try {
    return penalty_objective(pr, x, xbar, k);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// Upper directional derivative of phi_k at y along d under the eps model:
/// the support function of the model polytope in direction d.
double model_slope(const Problem& pr, const Vector& y, const Vector& xbar, double k, double eps,
                   const Vector& d) {
  double s = 0.0;
  for (const Factor& f : assemble_model(pr, y, xbar, k, eps).factors) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vector& g : f.generators) best = std::max(best, g.dot(d));
    s += f.scale * best;
  }
  return s;
}

/// Bisection for the sign change of the model slope along -dir, for use when
/// value differences fall below rounding. Returns x if no step is found.
Vector slope_step(const Problem& pr, const Vector& x, const Vector& xbar, double k, double eps,
                  const Vector& dir, double t_hi, const BallProjection& project) {
  const Vector d = -dir;
  auto slope = [&](double t) {
    try {
      return model_slope(pr, project(x + t * d), xbar, k, eps, d);
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double lo = 0.0, hi = t_hi;
  for (int e = 0; e < 60 && slope(hi) < 0.0; ++e) {
    lo = hi;
    hi *= 2.0;
  }
  for (int b = 0; b < 100 && hi - lo > 1e-17 * hi; ++b) {
    double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0) lo = mid; else hi = mid;
  }
  return lo > 0.0 ? project(x + lo * d) : x;
}

constexpr double kEpsStart = 1e-2;
constexpr double kEpsFloor = 1e-12;
constexpr double kArmijo = 1e-4;

}  // namespace

SubproblemResult solve_subproblem(const Problem& pr, const Vector& xbar, double k,
                                  const PenaltyConfig& cfg, const Vector& x_init) {
  cfg.validate();
  if (!(k > 0.0)) throw std::invalid_argument("penalty weight must be > 0");
  if (x_init.size() != pr.n || xbar.size() != pr.n)
    throw std::invalid_argument("solve_subproblem: dimension mismatch");
  if ((x_init - xbar).norm() > cfg.delta * (1.0 + 1e-12))
    throw std::invalid_argument("solve_subproblem: x_init outside B(xbar, delta)");

  const BallProjection project(xbar, cfg.delta);
  const double c = cfg.step_scale > 0.0 ? cfg.step_scale : cfg.delta / 10.0;

  SubproblemResult res;
  double init_value = penalty_objective(pr, x_init, xbar, k);
  Vector x = init_value <= 0.0 ? x_init : xbar;
  double value = std::min(init_value, 0.0);
  Vector best = x;
  double best_value = value;

  std::size_t it = 0;
  for (std::size_t t = 1; t <= cfg.max_iterations; ++t, ++it) {
    Vector g = subgradient(pr, x, xbar, k);
    double gn = g.norm();
    if (gn == 0.0) break;
    Vector y = project(x - (c / std::sqrt(static_cast<double>(t)) / gn) * g);
    double v = safe_objective(pr, y, xbar, k);
    if (!std::isfinite(v)) continue;
    x = std::move(y);
    if (v < best_value) {
      best = x;
      best_value = v;
    }
  }

  x = best;
  value = best_value;
  double eps = kEpsStart;
  double step = cfg.delta / 10.0;
  for (std::size_t p = 0; p < cfg.polish_iterations; ++p, ++it) {
    Model model = assemble_model(pr, x, xbar, k, eps);
    MinNormResult mn = min_norm_point(model.factors);
    if (mn.norm <= cfg.stationarity_tol) {
      if (eps <= kEpsFloor) break;
      eps /= 10.0;
      continue;
    }
    const Vector& dir = mn.point;  // step along -dir
    const double dd = dir.squaredNorm();
    double trial = 4.0 * step;
    bool accepted = false;
    Vector y_best;
    double v_best = value;
    double t_best = 0.0;
    for (int h = 0; h < 200 && trial > 0.0; ++h, trial *= 0.5) {
      Vector y = project(x - trial * dir);
      double dec = dir.dot(x - y);
      if (!(dec > 0.0)) continue;
      double v = safe_objective(pr, y, xbar, k);
      if (accepted) {
        if (v < v_best) {
          y_best = std::move(y);
          v_best = v;
          t_best = trial;
        } else {
          break;
        }
      } else if (v <= value - kArmijo * dec) {
        accepted = true;
        y_best = std::move(y);
        v_best = v;
        t_best = trial;
      }
      if (trial * std::sqrt(dd) < 1e-300) break;
    }
    if (!accepted || !(v_best < value)) {
      Vector y = slope_step(pr, x, xbar, k, eps, dir, 4.0 * step, project);
      double v = safe_objective(pr, y, xbar, k);
      const double slack = 1e-15 * std::max(1.0, std::abs(value));
      if (y != x && v <= 0.0 && v <= value + slack &&
          min_norm_point(assemble_model(pr, y, xbar, k, eps).factors).norm < mn.norm) {
        step = std::max((y - x).norm() / std::sqrt(dd), 1e-300);
        x = std::move(y);
        value = v;
        continue;
      }
      if (eps <= kEpsFloor) break;
      eps /= 10.0;
      continue;
    }
    x = std::move(y_best);
    value = v_best;
    step = t_best;
    eps = std::min(eps * 10.0, kEpsStart);
  }

  res.x = x;
  res.value = value;
  res.iterations = it;
  res.beats_reference = value <= 0.0;
  res.stationarity =
      min_norm_point(assemble_model(pr, x, xbar, k, cfg.eps_act).factors).norm;
  res.flagged = !res.beats_reference;
  res.status = res.flagged ? "flagged: phi_k(x) > phi_k(xbar)" : "ok";
  return res;
}

ExtractedMultipliers extract_multipliers(const Problem& pr, const Vector& xk, double k,
                                         const Vector& xbar, double eps_act) {
  Model model = assemble_model(pr, xk, xbar, k, eps_act);
  if (model.factors.front().generators.empty())
    throw std::logic_error("extract_multipliers: empty activity set");
  MinNormResult mn = min_norm_point(model.factors);

  ExtractedMultipliers out;
  out.stationarity = mn.norm;
  out.mult.lambda = Vector::Zero(static_cast<Eigen::Index>(pr.p()));
  const auto& w = mn.weights.front();
  for (std::size_t i = 0; i < w.size(); ++i)
    out.mult.lambda[static_cast<Eigen::Index>(model.objective_of[i])] += w[i];
  out.mult.lambda /= out.mult.lambda.sum();

  out.mult.mu = Vector::Zero(static_cast<Eigen::Index>(pr.m()));
  for (std::size_t i = 0; i < pr.m(); ++i)
    out.mult.mu[static_cast<Eigen::Index>(i)] = k * std::max(pr.inequalities[i].value(xk), 0.0);
  out.mult.tau = Vector::Zero(static_cast<Eigen::Index>(pr.r()));
  out.branch_signs.assign(pr.r(), 1);
  for (std::size_t j = 0; j < pr.r(); ++j) {
    double h = evaluate(pr.equalities[j], xk);
    out.mult.tau[static_cast<Eigen::Index>(j)] = k * std::abs(h);
    out.branch_signs[j] = h < 0.0 ? -1 : 1;
  }
  return out;
}

Multipliers SequenceRecord::signed_multipliers() const {
  Multipliers s = mult;
  for (std::size_t j = 0; j < branch_signs.size(); ++j)
    s.tau[static_cast<Eigen::Index>(j)] *= branch_signs[j];
  return s;
}

double SequenceRecord::e2_max() const {
  return e2.empty() ? 0.0 : *std::max_element(e2.begin(), e2.end());
}

double SequenceRecord::complementarity_sum(const Problem& pr) const {
  double s = 0.0;
  for (std::size_t i = 0; i < pr.m(); ++i)
    s += mult.mu[static_cast<Eigen::Index>(i)] * pr.inequalities[i].value(x);
  for (std::size_t j = 0; j < pr.r(); ++j)
    s += mult.tau[static_cast<Eigen::Index>(j)] * branch_signs[j] * evaluate(pr.equalities[j], x);
  return s;
}

std::vector<SequenceRecord> generate_akkt_sequence(const Problem& pr, const Vector& xbar,
                                                   const PenaltyConfig& cfg) {
  cfg.validate();
  if (xbar.size() != pr.n) throw std::invalid_argument("candidate point dimension mismatch");
  FeasibilityReport feas = feasibility_violation(pr, xbar);
  if (feas.aggregate > 1e-8)
    throw std::invalid_argument("candidate point is infeasible (violation " +
                                std::to_string(feas.aggregate) + ")");

  std::vector<SequenceRecord> records;
  Vector x = xbar;
  for (double k : cfg.schedule) {
    SubproblemResult sub = solve_subproblem(pr, xbar, k, cfg, x);
    ExtractedMultipliers ex = extract_multipliers(pr, sub.x, k, xbar, cfg.eps_act);

    SequenceRecord rec;
    rec.k = k;
    rec.x = sub.x;
    rec.mult = ex.mult;
    rec.branch_signs = ex.branch_signs;
    rec.residual = residual_m(pr, sub.x, rec.mult, cfg.eps_act, ResidualMode::General).value;
    rec.residual_prime =
        residual_m(pr, sub.x, rec.signed_multipliers(), cfg.eps_act, ResidualMode::Prime).value;
    rec.feasibility = feasibility_violation(pr, sub.x);
    PhiValue phi = phi_value(pr, sub.x, xbar, cfg.eps_act);
    rec.phi = phi.value;
    rec.penalty_value = sub.value;
    const double half_sum = 0.5 * rec.complementarity_sum(pr);
    for (double shifted : phi.shifted) rec.e2.push_back(shifted + half_sum);
    rec.stationarity = sub.stationarity;
    rec.distance = (sub.x - xbar).norm();
    rec.iterations = sub.iterations;
    rec.flagged = sub.flagged;
    rec.status = sub.status;
    records.push_back(rec);

    x = sub.x;
    if (rec.residual < cfg.truncate_residual) break;
  }
  return records;
}

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string joined(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += num(v[i]);
  }
  return s;
}

}  // namespace

void write_sequence_csv(std::ostream& out, const std::vector<SequenceRecord>& records) {
  out << "k,x,lambda,mu,tau,residual_m,residual_m_prime,feas,phi,e2_max,status\n";
  for (const auto& r : records) {
    out << num(r.k) << ',' << joined(r.x) << ',' << joined(r.mult.lambda) << ','
        << joined(r.mult.mu) << ',' << joined(r.mult.tau) << ',' << num(r.residual) << ','
        << num(r.residual_prime) << ',' << num(r.feasibility.aggregate) << ',' << num(r.phi)
        << ',' << num(r.e2_max()) << ',' << (r.flagged ? "flagged" : "ok") << '\n';
  }
}

}  // namespace akkt
