// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "akkt/problem.hpp"

namespace akkt {
namespace {

PiecewiseMaxFn fn(int n, std::initializer_list<const char*> pieces, bool convex,
                  std::string label) {
  PiecewiseMaxFn f;
  f.label = std::move(label);
  f.convex = convex;
  for (const char* p : pieces) f.pieces.push_back(parse_expr(p, n));
  return f;
}

Vector point(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> out;
  {
    Problem pr{"mangasarian", 1, {fn(1, {"x0"}, true, "f")}, {fn(1, {"x0^2"}, true, "g")}, {}};
    out.push_back({pr, point({0.0}),
                   "feasible set {0}; KKT fails at 0 while AKKT holds"});
  }
  {
    Problem pr{"abs-biobjective",
               1,
               {fn(1, {"x0", "-x0"}, true, "|x0|"), fn(1, {"x0 - 1", "1 - x0"}, true, "|x0-1|")},
               {},
               {}};
    out.push_back({pr, point({0.5}), "unconstrained; every point of [0,1] is weakly efficient"});
  }
  {
    Problem pr{"linear-tradeoff",
               2,
               {fn(2, {"x0"}, true, "f0"), fn(2, {"x1"}, true, "f1")},
               {},
               {parse_expr("x0 + x1 - 1", 2)}};
    out.push_back({pr, point({0.5, 0.5}), "affine equality; QNCQ holds"});
  }
  {
    // The objective is in fact convex; the flag stays false so that the
    // convex certifier's hypothesis check has a catalog instance to refuse.
    Problem pr{"nonconvex-max",
               1,
               {fn(1, {"x0", "-2*x0"}, false, "max(x0,-2x0)")},
               {fn(1, {"x0 - 1"}, false, "g")},
               {}};
    out.push_back({pr, point({0.0}), "kink minimizer, inactive inequality"});
  }
  const double s = std::sqrt(0.5);
  {
    Problem pr{"disk-biobjective",
               2,
               {fn(2, {"x0"}, true, "f0"), fn(2, {"x1"}, true, "f1")},
               {fn(2, {"x0^2 + x1^2 - 1"}, true, "disk")},
               {}};
    out.push_back({pr, point({-s, -s}), "active smooth convex inequality"});
  }
  {
    Problem pr{"circle-equality",
               2,
               {fn(2, {"x0"}, true, "f0"), fn(2, {"x1"}, true, "f1")},
               {},
               {parse_expr("x0^2 + x1^2 - 1", 2)}};
    out.push_back({pr, point({-s, -s}), "nonlinear equality; convex certifier must refuse"});
  }
  for (const auto& e : out) validate(e.problem);
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry& builtin(const std::string& name) {
  for (const auto& e : catalog())
    if (e.problem.name == name) return e;
  throw SchemaError("unknown builtin problem '" + name + "'");
}

}  // namespace akkt
