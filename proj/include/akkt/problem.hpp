// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "akkt/expr.hpp"

namespace akkt {

/// Malformed problem document or a Problem that violates its invariants.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pointwise maximum of smooth pieces. A single piece is C^1.
struct PiecewiseMaxFn {
  std::vector<Expr> pieces;
  std::string label;
  bool convex = false;  // user assertion, spot-checked by the certifier

  double value(const Vector& x) const;
  /// Index of the first piece attaining the maximum, with its value.
  std::pair<std::size_t, double> argmax(const Vector& x) const;
};

/// min f(x) over {x : g(x) <= 0, h(x) = 0}, f: R^n -> R^p.
struct Problem {
  std::string name;
  int n = 0;
  std::vector<PiecewiseMaxFn> objectives;
  std::vector<PiecewiseMaxFn> inequalities;
  std::vector<Expr> equalities;

  std::size_t p() const { return objectives.size(); }
  std::size_t m() const { return inequalities.size(); }
  std::size_t r() const { return equalities.size(); }
};

/// Throws SchemaError unless p >= 1, every function has a piece, and every
/// expression stays inside dimension n.
void validate(const Problem& pr);

struct FeasibilityReport {
  double inequality = 0.0;  // max_i max(g_i(x), 0)
  double equality = 0.0;    // max_j |h_j(x)|
  double aggregate = 0.0;   // max of the two
};

FeasibilityReport feasibility_violation(const Problem& pr, const Vector& x);

Problem problem_from_json(const nlohmann::json& doc);
nlohmann::json problem_to_json(const Problem& pr);

/// Reads a problem file, or a builtin when `source` is "builtin:<name>".
Problem load_problem(const std::string& source);
void save_problem(const Problem& pr, const std::filesystem::path& path);

struct CatalogEntry {
  Problem problem;
  Vector candidate;  // the point the entry is meant to be certified at
  std::string note;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& builtin(const std::string& name);

}  // namespace akkt
