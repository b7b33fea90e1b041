// SPDX-License-Identifier: Apache-2.0

#include "akkt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace akkt {

double PiecewiseMaxFn::value(const Vector& x) const { return argmax(x).second; }

std::pair<std::size_t, double> PiecewiseMaxFn::argmax(const Vector& x) const {
  if (pieces.empty()) throw SchemaError("function '" + label + "' has no pieces");
  std::size_t best = 0;
  double best_value = evaluate(pieces[0], x);
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    double v = evaluate(pieces[i], x);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return {best, best_value};
}

namespace {

void check_expr(const Expr& e, int n, const std::string& where) {
  if (e.max_variable() >= n)
    throw SchemaError(where + ": expression '" + e.to_string() + "' uses x" +
                      std::to_string(e.max_variable()) + " but n = " + std::to_string(n));
}

void check_fn(const PiecewiseMaxFn& f, int n, const std::string& where) {
  if (f.pieces.empty()) throw SchemaError(where + ": function has no pieces");
  for (const auto& piece : f.pieces) check_expr(piece, n, where);
}

}  // namespace

void validate(const Problem& pr) {
  if (pr.n < 1) throw SchemaError("problem '" + pr.name + "': n must be >= 1");
  if (pr.objectives.empty())
    throw SchemaError("problem '" + pr.name + "': at least one objective is required");
  for (std::size_t l = 0; l < pr.p(); ++l)
    check_fn(pr.objectives[l], pr.n, "objective " + std::to_string(l));
  for (std::size_t i = 0; i < pr.m(); ++i)
    check_fn(pr.inequalities[i], pr.n, "inequality " + std::to_string(i));
  for (std::size_t j = 0; j < pr.r(); ++j)
    check_expr(pr.equalities[j], pr.n, "equality " + std::to_string(j));
}

FeasibilityReport feasibility_violation(const Problem& pr, const Vector& x) {
  if (x.size() != pr.n)
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " does not match n = " + std::to_string(pr.n));
  FeasibilityReport rep;
  for (const auto& g : pr.inequalities)
    rep.inequality = std::max(rep.inequality, std::max(g.value(x), 0.0));
  for (const auto& h : pr.equalities)
    rep.equality = std::max(rep.equality, std::abs(evaluate(h, x)));
  rep.aggregate = std::max(rep.inequality, rep.equality);
  return rep;
}

// ---------------------------------------------------------------------------
// Structured text (JSON) form

namespace {

using nlohmann::json;

Expr parse_field(const json& text, int n, const std::string& where) {
  if (!text.is_string()) throw SchemaError(where + ": expression must be a string");
  try {
    return parse_expr(text.get<std::string>(), n);
  } catch (const ParseError& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

std::vector<PiecewiseMaxFn> parse_functions(const json& doc, const char* key, int n) {
  std::vector<PiecewiseMaxFn> out;
  if (!doc.contains(key)) return out;
  const json& list = doc.at(key);
  if (!list.is_array()) throw SchemaError(std::string(key) + " must be an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& item = list[i];
    std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("pieces") || !item["pieces"].is_array())
      throw SchemaError(where + ": expected an object with a 'pieces' array");
    PiecewiseMaxFn fn;
    fn.label = item.value("label", where);
    if (item.contains("convex")) {
      if (!item["convex"].is_boolean()) throw SchemaError(where + ": 'convex' must be a bool");
      fn.convex = item["convex"].get<bool>();
    }
    for (const auto& piece : item["pieces"]) fn.pieces.push_back(parse_field(piece, n, where));
    if (fn.pieces.empty()) throw SchemaError(where + ": 'pieces' is empty");
    out.push_back(std::move(fn));
  }
  return out;
}

}  // namespace

Problem problem_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("problem document must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw SchemaError("'n' must be an integer");
  Problem pr;
  pr.name = doc.value("name", std::string("unnamed"));
  pr.n = doc["n"].get<int>();
  if (pr.n < 1) throw SchemaError("'n' must be >= 1");
  if (!doc.contains("objectives")) throw SchemaError("'objectives' is required");
  pr.objectives = parse_functions(doc, "objectives", pr.n);
  pr.inequalities = parse_functions(doc, "inequalities", pr.n);
  if (doc.contains("equalities")) {
    const json& list = doc["equalities"];
    if (!list.is_array()) throw SchemaError("equalities must be an array");
    for (std::size_t j = 0; j < list.size(); ++j) {
      std::string where = "equalities[" + std::to_string(j) + "]";
      const json& item = list[j];
      if (item.is_object()) {
        const json& pieces = item.value("pieces", json::array());
        if (pieces.size() != 1)
          throw SchemaError(where + ": equality constraints must be a single smooth expression");
        pr.equalities.push_back(parse_field(pieces[0], pr.n, where));
      } else {
        pr.equalities.push_back(parse_field(item, pr.n, where));
      }
    }
  }
  validate(pr);
  return pr;
}

json problem_to_json(const Problem& pr) {
  auto functions = [](const std::vector<PiecewiseMaxFn>& fns) {
    json list = json::array();
    for (const auto& f : fns) {
      json pieces = json::array();
      for (const auto& p : f.pieces) pieces.push_back(p.to_string());
      list.push_back({{"label", f.label}, {"pieces", pieces}, {"convex", f.convex}});
    }
    return list;
  };
  json eq = json::array();
  for (const auto& h : pr.equalities) eq.push_back(h.to_string());
  return json{{"name", pr.name},
              {"n", pr.n},
              {"objectives", functions(pr.objectives)},
              {"inequalities", functions(pr.inequalities)},
              {"equalities", eq}};
}

Problem load_problem(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return builtin(source.substr(prefix.size())).problem;
  std::ifstream in(source);
  if (!in) throw SchemaError("cannot open problem file '" + source + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + source + "': " + e.what());
  }
  return problem_from_json(doc);
}

void save_problem(const Problem& pr, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << problem_to_json(pr).dump(2) << '\n';
}

}  // namespace akkt
