// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "akkt/expr.hpp"

namespace akkt {

/// A solver ran out of iterations or otherwise failed to certify its output.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// scale * conv(generators); scale >= 0.
struct Factor {
  double scale = 1.0;
  std::vector<Vector> generators;
};

struct MinNormOptions {
  double tolerance = 1e-10;        // <p, p - v> <= tolerance * max(1, |p|^2)
  std::size_t max_iterations = 0;  // 0 selects 10 * (total generators)^2
};

struct MinNormResult {
  Vector point;
  double norm = 0.0;
  /// weights[f][i]: convex coefficient of generator i of factor f.
  std::vector<std::vector<double>> weights;
  std::size_t iterations = 0;
  double gap = 0.0;  // final Wolfe gap <p, p - v>
};

/// Minimum-norm point of the Minkowski sum of scaled polytopes, by Wolfe's
/// algorithm over the sum's vertices. The linear minimization oracle is the
/// sum of per-factor oracles; ties go to the lowest generator index.
MinNormResult min_norm_point(std::span<const Factor> factors, const MinNormOptions& opts = {});

}  // namespace akkt
