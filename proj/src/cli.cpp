// SPDX-License-Identifier: Apache-2.0

#include "akkt/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "akkt/certify.hpp"
#include "akkt/report.hpp"

namespace akkt::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"penalty", "certify-akkt", "check-kkt",
                                            "certify-convex", "oracle", "catalog"};

constexpr double kSequenceTol = 1e-2;
constexpr double kKktTol = 1e-6;

double parse_real(std::string_view s, const std::string& what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw UsageError("invalid number '" + std::string(s) + "' in " + what);
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    out.push_back(parse_real(std::string_view(text).substr(start, comma - start), what));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Context {
  Problem pr;
  Vector xbar;
  PenaltyConfig cfg;
  double tol = 0.0;
};

Context prepare(const RunSpec& spec, double default_tol) {
  if (spec.problem.empty()) throw UsageError(spec.command + " needs a problem source");
  Context c;
  c.pr = load_problem(spec.problem);
  if (spec.point) {
    c.xbar = to_vector(*spec.point);
  } else if (spec.problem.rfind("builtin:", 0) == 0) {
    c.xbar = builtin(spec.problem.substr(8)).candidate;
  } else {
    throw UsageError("--point is required for problem files");
  }
  if (c.xbar.size() != c.pr.n)
    throw UsageError("--point has " + std::to_string(c.xbar.size()) + " coordinates, problem has n = " +
                     std::to_string(c.pr.n));
  if (spec.delta) c.cfg.delta = *spec.delta;
  if (spec.schedule) c.cfg.schedule = *spec.schedule;
  if (spec.eps_act) c.cfg.eps_act = *spec.eps_act;
  c.tol = spec.tol.value_or(default_tol);
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  c.cfg.validate();
  return c;
}

json header(const RunSpec& spec, const Context& c) {
  return {{"command", spec.command},
          {"problem", c.pr.name},
          {"source", spec.problem},
          {"candidate", to_json(c.xbar)},
          {"config",
           {{"tol", c.tol},
            {"eps_act", c.cfg.eps_act},
            {"delta", c.cfg.delta},
            {"schedule", c.cfg.schedule},
            {"seed", spec.seed},
            {"mode", to_string(spec.mode)}}},
          {"metadata",
           {{"lambda_normalization",
             "lambda is scaled to sum 1; unnormalized multipliers differ by a positive factor"}}}};
}

void write_csv(const RunSpec& spec, const std::vector<SequenceRecord>& records) {
  if (spec.csv_path.empty()) return;
  std::ofstream f(spec.csv_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open CSV output '" + spec.csv_path + "'");
  write_sequence_csv(f, records);
}

void emit(const RunSpec& spec, const json& doc, std::ostream& out) {
  std::string text = dump_report(doc);
  if (spec.report_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(spec.report_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open report output '" + spec.report_path + "'");
  f << text;
}

int finish(const RunSpec& spec, json doc, const std::string& primary, bool holds, Outcome outcome,
           std::ostream& out) {
  int code = holds ? kOk : kVerdictFailed;
  doc["primary"] = {{"verdict", primary}, {"outcome", to_string(outcome)}};
  doc["exit_status"] = code;
  emit(spec, doc, out);
  return code;
}

Verdict qncq_verdict(const QncqCheck& q, double tol) {
  return {"QNCQ-sufficient",
          q.outcome,
          tol,
          {{"min_norm", q.min_norm},
           {"generators", static_cast<double>(q.generators)},
           {"radii_witnessed", static_cast<double>(q.radii_witnessed)},
           {"radii_sampled", static_cast<double>(q.radii_sampled)}},
          q.note};
}

int run_penalty(const RunSpec& spec, std::ostream& out) {
  Context c = prepare(spec, kSequenceTol);
  auto records = generate_akkt_sequence(c.pr, c.xbar, c.cfg);
  write_csv(spec, records);
  bool ok = std::none_of(records.begin(), records.end(), [](const auto& r) { return r.flagged; });
  json doc = header(spec, c);
  doc["sequence"] = to_json(records);
  return finish(spec, doc, "sequence-unflagged", ok, ok ? Outcome::Holds : Outcome::Fails, out);
}

int run_certify_akkt(const RunSpec& spec, std::ostream& out) {
  Context c = prepare(spec, kSequenceTol);
  auto records = generate_akkt_sequence(c.pr, c.xbar, c.cfg);
  write_csv(spec, records);
  CertReport rep = check_akkt_conditions(records, c.pr, c.xbar, c.tol, spec.mode);
  bool ok = std::all_of(rep.verdicts.begin(), rep.verdicts.end(), [](const Verdict& v) { return v.holds(); });

  KktRecovery rec = kkt_from_akkt(records, c.pr, c.xbar, c.cfg.eps_act, kKktTol);
  rep.add({"KKT-recovery",
           rec.outcome,
           kKktTol,
           {{"residual", rec.residual}, {"tail_spread", rec.tail_spread}, {"final_lambda", rec.final_lambda}},
           rec.note});
  rep.add(qncq_verdict(check_qncq_sufficient(c.pr, c.xbar, c.cfg.eps_act, kKktTol, spec.seed), kKktTol));

  json doc = header(spec, c);
  doc["verdicts"] = to_json(rep);
  doc["kkt_limit"] = to_json(rec.limit);
  doc["sequence"] = to_json(records);
  return finish(spec, doc, "AKKT", ok, ok ? Outcome::Holds : Outcome::Fails, out);
}

int run_check_kkt(const RunSpec& spec, std::ostream& out) {
  Context c = prepare(spec, kKktTol);
  KktCheck k = check_kkt(c.pr, c.xbar, c.cfg.eps_act, c.tol);
  CertReport rep;
  rep.add({"KKT",
           k.holds ? Outcome::Holds : Outcome::Fails,
           c.tol,
           {{"residual", k.residual}, {"multiplier_cap", k.multiplier_cap}},
           ""});
  rep.add(qncq_verdict(check_qncq_sufficient(c.pr, c.xbar, c.cfg.eps_act, c.tol, spec.seed), c.tol));
  json doc = header(spec, c);
  doc["verdicts"] = to_json(rep);
  doc["multipliers"] = to_json(k.best);
  return finish(spec, doc, "KKT", k.holds, rep.at("KKT").outcome, out);
}

int run_certify_convex(const RunSpec& spec, std::ostream& out) {
  Context c = prepare(spec, kSequenceTol);
  auto records = generate_akkt_sequence(c.pr, c.xbar, c.cfg);
  write_csv(spec, records);
  ConvexCertificate cert = certify_weak_efficiency_convex(c.pr, c.xbar, records, c.tol, spec.seed);
  CertReport rep = cert.conditions;
  rep.add({"convex-sufficiency",
           cert.certified ? Outcome::Holds : Outcome::Fails,
           c.tol,
           {{"scalarized_value", cert.scalarized_value},
            {"convexity_pairs", static_cast<double>(cert.convexity_pairs)}},
           cert.note});
  json doc = header(spec, c);
  doc["verdicts"] = to_json(rep);
  doc["sequence"] = to_json(records);
  return finish(spec, doc, "convex-sufficiency", cert.certified,
                rep.at("convex-sufficiency").outcome, out);
}

int run_oracle(const RunSpec& spec, std::ostream& out) {
  Context c = prepare(spec, kSequenceTol);
  Grid grid;
  grid.lower = spec.lower ? to_vector(*spec.lower) : Vector(c.xbar.array() - 1.0);
  grid.upper = spec.upper ? to_vector(*spec.upper) : Vector(c.xbar.array() + 1.0);
  grid.step = spec.step;
  OracleResult r = weak_efficiency_oracle(c.pr, c.xbar, grid);
  json doc = header(spec, c);
  doc["grid"] = {{"lower", to_json(grid.lower)}, {"upper", to_json(grid.upper)}, {"step", grid.step}};
  CertReport rep;
  rep.add({"weak-efficiency-oracle",
           r.weakly_efficient ? Outcome::Holds : Outcome::Fails,
           1e-9,
           {{"points", static_cast<double>(r.points)}, {"feasible_points", static_cast<double>(r.feasible_points)}},
           r.weakly_efficient ? "no grid point strictly dominates the candidate" : "dominating grid point found"});
  doc["verdicts"] = to_json(rep);
  doc["counterexample"] = r.counterexample ? to_json(*r.counterexample) : json(nullptr);
  return finish(spec, doc, "weak-efficiency-oracle", r.weakly_efficient,
                rep.at("weak-efficiency-oracle").outcome, out);
}

int run_catalog(const RunSpec& spec, std::ostream& out) {
  json list = json::array();
  for (const auto& e : catalog()) {
    const Problem& pr = e.problem;
    out << pr.name << "  n=" << pr.n << " p=" << pr.p() << " m=" << pr.m() << " r=" << pr.r()
        << "  candidate=(";
    for (Eigen::Index i = 0; i < e.candidate.size(); ++i) out << (i ? "," : "") << e.candidate[i];
    out << ")  " << e.note << '\n';
    list.push_back({{"name", pr.name}, {"candidate", to_json(e.candidate)}, {"note", e.note},
                    {"problem", problem_to_json(pr)}});
    if (!spec.export_dir.empty()) {
      std::filesystem::create_directories(spec.export_dir);
      save_problem(pr, std::filesystem::path(spec.export_dir) / (pr.name + ".json"));
    }
  }
  if (!spec.report_path.empty()) {
    std::ofstream f(spec.report_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open report output '" + spec.report_path + "'");
    f << dump_report({{"command", "catalog"}, {"problems", list}});
  }
  return kOk;
}

}  // namespace

std::vector<double> parse_point(const std::string& text) { return parse_list(text, "--point"); }

std::vector<double> parse_schedule(const std::string& text) {
  const std::string prefix = "geometric:";
  if (text.rfind(prefix, 0) == 0) {
    std::string body = text.substr(prefix.size());
    std::size_t dots = body.find("..");
    if (dots == std::string::npos) throw UsageError("schedule must look like geometric:A..B");
    double a = parse_real(std::string_view(body).substr(0, dots), "--schedule");
    double b = parse_real(std::string_view(body).substr(dots + 2), "--schedule");
    try {
      return geometric_schedule(a, b);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return parse_list(text, "--schedule");
}

std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Approximate KKT certification for nonsmooth multiobjective problems", "akkt"};
  RunSpec spec;
  std::string point, schedule, mode = "general", lower, upper;
  app.add_option("command", spec.command, "penalty | certify-akkt | check-kkt | certify-convex | oracle | catalog")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("problem", spec.problem, "problem file or builtin:<name>");
  app.add_option("--point", point, "candidate point, comma-separated");
  app.add_option("--delta", spec.delta, "radius of the penalty ball");
  app.add_option("--schedule", schedule, "geometric:A..B or a comma list of penalty weights");
  app.add_option("--tol", spec.tol, "certification tolerance");
  app.add_option("--eps-act", spec.eps_act, "activity threshold for subdifferential pieces");
  app.add_option("--seed", spec.seed, "seed for sampled checks");
  app.add_option("--report", spec.report_path, "report path (default: stdout)");
  app.add_option("--csv", spec.csv_path, "sequence CSV path");
  app.add_option("--mode", mode, "residual mode for certify-akkt")->check(CLI::IsMember({"general", "prime"}));
  app.add_option("--lower", lower, "oracle grid lower corner (default point - 1)");
  app.add_option("--upper", upper, "oracle grid upper corner (default point + 1)");
  app.add_option("--step", spec.step, "oracle grid step");
  app.add_option("--export", spec.export_dir, "catalog: directory for problem files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  if (spec.command != "catalog" && spec.problem.empty())
    throw UsageError(spec.command + " needs a problem source");
  if (!point.empty()) spec.point = parse_point(point);
  if (!schedule.empty()) spec.schedule = parse_schedule(schedule);
  if (!lower.empty()) spec.lower = parse_list(lower, "--lower");
  if (!upper.empty()) spec.upper = parse_list(upper, "--upper");
  spec.mode = residual_mode_from_string(mode);
  return spec;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.command == "penalty") return run_penalty(spec, out);
    if (spec.command == "certify-akkt") return run_certify_akkt(spec, out);
    if (spec.command == "check-kkt") return run_check_kkt(spec, out);
    if (spec.command == "certify-convex") return run_certify_convex(spec, out);
    if (spec.command == "oracle") return run_oracle(spec, out);
    if (spec.command == "catalog") return run_catalog(spec, out);
    err << "akkt: unknown command '" << spec.command << "'\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "akkt: domain error: " << e.what() << '\n';
    return kNumerical;
  } catch (const NumericalError& e) {
    err << "akkt: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const HypothesisError& e) {
    err << "akkt: hypothesis not satisfied: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "akkt: " << e.what() << '\n';
    return kUsage;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunSpec> spec;
  try {
    spec = parse_args(argc, argv, out);
  } catch (const std::exception& e) {
    err << "akkt: " << e.what() << "\nrun 'akkt --help' for usage\n";
    return kUsage;
  }
  if (!spec) return kOk;
  return run(*spec, out, err);
}

}  // namespace akkt::cli
