// SPDX-License-Identifier: Apache-2.0

#include "akkt/minnorm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace akkt {
namespace {

struct Atom {
  std::vector<std::size_t> choice;  // one generator index per factor
  Vector v;
};

class MinkowskiSum {
 public:
  explicit MinkowskiSum(std::span<const Factor> factors) : factors_(factors) {
    if (factors_.empty()) throw std::invalid_argument("min_norm_point: no factors");
    dim_ = -1;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const auto& fac = factors_[f];
      if (fac.generators.empty())
        throw std::invalid_argument("min_norm_point: factor " + std::to_string(f) +
                                    " has no generators");
      if (!(fac.scale >= 0.0) || !std::isfinite(fac.scale))
        throw std::invalid_argument("min_norm_point: factor scale must be finite and >= 0");
      for (const auto& g : fac.generators) {
        if (dim_ < 0) dim_ = g.size();
        if (g.size() != dim_)
          throw std::invalid_argument("min_norm_point: generator dimensions differ");
        if (!g.allFinite())
          throw std::invalid_argument("min_norm_point: non-finite generator");
      }
      total_ += fac.generators.size();
    }
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t total_generators() const { return total_; }

  Atom make(std::vector<std::size_t> choice) const {
    Atom a{std::move(choice), Vector::Zero(dim_)};
    for (std::size_t f = 0; f < factors_.size(); ++f)
      a.v += factors_[f].scale * factors_[f].generators[a.choice[f]];
    return a;
  }

  /// argmin over the sum of <x, v>, decomposed per factor.
  Atom oracle(const Vector& x) const {
    std::vector<std::size_t> choice(factors_.size(), 0);
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const auto& gens = factors_[f].generators;
      double best = x.dot(gens[0]);
      for (std::size_t i = 1; i < gens.size(); ++i) {
        double d = x.dot(gens[i]);
        if (d < best) {
          best = d;
          choice[f] = i;
        }
      }
    }
    return make(std::move(choice));
  }

  Atom shortest_vertex_guess() const {
    std::vector<std::size_t> choice(factors_.size(), 0);
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const auto& gens = factors_[f].generators;
      double best = gens[0].squaredNorm();
      for (std::size_t i = 1; i < gens.size(); ++i) {
        double d = gens[i].squaredNorm();
        if (d < best) {
          best = d;
          choice[f] = i;
        }
      }
    }
    return make(std::move(choice));
  }

  std::size_t size() const { return factors_.size(); }
  std::size_t generators_in(std::size_t f) const { return factors_[f].generators.size(); }

 private:
  std::span<const Factor> factors_;
  Eigen::Index dim_ = 0;
  std::size_t total_ = 0;
};

/// Weights of the point of least norm in the affine hull of the corral.
std::vector<double> affine_minimizer(const std::vector<Atom>& corral) {
  const std::size_t k = corral.size();
  if (k == 1) return {1.0};
  const auto d = corral[0].v.size();
  Eigen::MatrixXd D(d, static_cast<Eigen::Index>(k - 1));
  for (std::size_t i = 1; i < k; ++i) D.col(static_cast<Eigen::Index>(i - 1)) = corral[i].v - corral[0].v;
  Vector beta = D.completeOrthogonalDecomposition().solve(-corral[0].v);
  std::vector<double> alpha(k);
  double rest = 0.0;
  for (std::size_t i = 1; i < k; ++i) {
    alpha[i] = beta[static_cast<Eigen::Index>(i - 1)];
    rest += alpha[i];
  }
  alpha[0] = 1.0 - rest;
  return alpha;
}

Vector combine(const std::vector<Atom>& corral, const std::vector<double>& w, Eigen::Index d) {
  Vector x = Vector::Zero(d);
  for (std::size_t i = 0; i < corral.size(); ++i) x += w[i] * corral[i].v;
  return x;
}

bool same_choices(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].choice != b[i].choice) return false;
  return true;
}

}  // namespace

MinNormResult min_norm_point(std::span<const Factor> factors, const MinNormOptions& opts) {
  MinkowskiSum sum(factors);
  const auto d = sum.dim();
  const std::size_t total = sum.total_generators();
  const std::size_t cap = opts.max_iterations ? opts.max_iterations : 10 * total * total;

  std::vector<Atom> corral{sum.shortest_vertex_guess()};
  std::vector<double> w{1.0};
  Vector x = corral[0].v;

  MinNormResult res;
  bool certified = false;
  for (std::size_t it = 0; it < cap; ++it) {
    res.iterations = it + 1;
    const double xx = x.squaredNorm();
    if (xx == 0.0) {
      res.gap = 0.0;
      certified = true;
      break;
    }
    Atom v = sum.oracle(x);
    res.gap = xx - x.dot(v.v);
    if (res.gap <= opts.tolerance * std::max(1.0, xx)) {
      certified = true;
      break;
    }
    auto present = std::find_if(corral.begin(), corral.end(),
                                [&](const Atom& a) { return a.choice == v.choice; });
    if (present != corral.end()) {
      // The oracle returned a corral vertex: x is optimal up to rounding.
      certified = true;
      break;
    }
    const std::vector<Atom> before = corral;
    corral.push_back(std::move(v));
    w.push_back(0.0);

    for (std::size_t minor = 0; minor <= corral.size() + 1; ++minor) {
      std::vector<double> alpha = affine_minimizer(corral);
      if (std::all_of(alpha.begin(), alpha.end(), [](double a) { return a > 0.0; })) {
        w = std::move(alpha);
        break;
      }
      double theta = 1.0;
      std::size_t drop = 0;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (alpha[i] <= 0.0) {
          double denom = w[i] - alpha[i];
          double t = denom > 0.0 ? w[i] / denom : 0.0;
          if (t < theta) {
            theta = t;
            drop = i;
          }
        }
      }
      for (std::size_t i = 0; i < corral.size(); ++i) w[i] = theta * alpha[i] + (1.0 - theta) * w[i];
      w[drop] = 0.0;
      std::vector<Atom> kept;
      std::vector<double> kept_w;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (w[i] > 0.0) {
          kept.push_back(std::move(corral[i]));
          kept_w.push_back(w[i]);
        }
      }
      corral = std::move(kept);
      w = std::move(kept_w);
      if (corral.size() == 1) {
        w = {1.0};
        break;
      }
    }
    double s = 0.0;
    for (double wi : w) s += wi;
    for (double& wi : w) wi /= s;
    x = combine(corral, w, d);
    if (same_choices(corral, before)) {
      certified = true;  // minor cycle rejected the new vertex: numerical fixed point
      break;
    }
  }
  if (!certified)
    throw NumericalError("min_norm_point: no optimality certificate after " +
                         std::to_string(cap) + " iterations (gap " + std::to_string(res.gap) + ")");

  res.point = x;
  res.norm = x.norm();
  res.weights.resize(sum.size());
  for (std::size_t f = 0; f < sum.size(); ++f) res.weights[f].assign(sum.generators_in(f), 0.0);
  for (std::size_t i = 0; i < corral.size(); ++i)
    for (std::size_t f = 0; f < sum.size(); ++f) res.weights[f][corral[i].choice[f]] += w[i];
  return res;
}

}  // namespace akkt
