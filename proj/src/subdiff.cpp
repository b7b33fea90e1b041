// SPDX-License-Identifier: Apache-2.0

#include "akkt/subdiff.hpp"

#include <algorithm>

namespace akkt {

SubdiffPolytope subdifferential(const PiecewiseMaxFn& fn, const Vector& x, double eps_act) {
  if (!(eps_act >= 0.0)) throw std::invalid_argument("eps_act must be >= 0");
  if (fn.pieces.empty()) throw SchemaError("function '" + fn.label + "' has no pieces");
  std::vector<double> values(fn.pieces.size());
  for (std::size_t i = 0; i < fn.pieces.size(); ++i) values[i] = evaluate(fn.pieces[i], x);
  const double top = *std::max_element(values.begin(), values.end());

  SubdiffPolytope poly;
  poly.point = x;
  poly.eps_act = eps_act;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= top - eps_act) {
      poly.active.push_back(i);
      poly.generators.push_back(eval_grad(fn.pieces[i], x).gradient);
    }
  }
  return poly;
}

PhiValue phi_value(const Problem& pr, const Vector& x, const Vector& xbar, double eps_act) {
  if (!(eps_act >= 0.0)) throw std::invalid_argument("eps_act must be >= 0");
  PhiValue out;
  out.shifted.resize(pr.p());
  for (std::size_t l = 0; l < pr.p(); ++l) {
    const auto& f = pr.objectives[l];
    out.shifted[l] = f.value(x) - f.value(xbar);
  }
  out.value = *std::max_element(out.shifted.begin(), out.shifted.end());
  for (std::size_t l = 0; l < pr.p(); ++l)
    if (out.shifted[l] >= out.value - eps_act) out.active.active.push_back(l);
  return out;
}

}  // namespace akkt
