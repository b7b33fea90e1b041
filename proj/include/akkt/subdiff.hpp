// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "akkt/problem.hpp"

namespace akkt {

inline constexpr double kDefaultEpsAct = 1e-6;

/// Clarke hull of a max-of-smooth function at a point: conv of the
/// gradients of the pieces within eps_act of the maximum. It contains the
/// limiting subdifferential, so residuals computed over it are lower bounds.
struct SubdiffPolytope {
  Vector point;
  std::vector<std::size_t> active;  // piece indices, ascending
  std::vector<Vector> generators;   // generators[i] = grad of pieces[active[i]]
  double eps_act = kDefaultEpsAct;
};

SubdiffPolytope subdifferential(const PiecewiseMaxFn& fn, const Vector& x,
                                double eps_act = kDefaultEpsAct);

/// Objectives l attaining phi(x) = max_l (f_l(x) - f_l(xbar)) within eps_act.
struct ActivitySimplex {
  std::vector<std::size_t> active;
};

struct PhiValue {
  double value = 0.0;
  ActivitySimplex active;
  std::vector<double> shifted;  // f_l(x) - f_l(xbar)
};

PhiValue phi_value(const Problem& pr, const Vector& x, const Vector& xbar,
                   double eps_act = kDefaultEpsAct);

}  // namespace akkt
