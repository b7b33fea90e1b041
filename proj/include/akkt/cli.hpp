// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "akkt/residual.hpp"

namespace akkt::cli {

enum Exit : int { kOk = 0, kVerdictFailed = 1, kUsage = 2, kNumerical = 3 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunSpec {
  std::string command;  // penalty | certify-akkt | check-kkt | certify-convex | oracle | catalog
  std::string problem;  // path or builtin:<name>; unused by catalog
  std::optional<std::vector<double>> point;  // defaults to the catalog candidate for builtins
  std::optional<double> delta;
  std::optional<std::vector<double>> schedule;
  std::optional<double> tol;
  std::optional<double> eps_act;
  std::uint64_t seed = 1;
  std::string report_path;  // empty: report goes to stdout
  std::string csv_path;
  ResidualMode mode = ResidualMode::General;
  std::optional<std::vector<double>> lower;  // oracle grid box, default point - 1
  std::optional<std::vector<double>> upper;  // default point + 1
  double step = 1e-3;
  std::string export_dir;  // catalog: write one problem file per entry
};

/// Comma-separated reals. Throws UsageError.
std::vector<double> parse_point(const std::string& text);
/// "geometric:A..B" or a comma list.
std::vector<double> parse_schedule(const std::string& text);

/// Throws UsageError on bad arguments. Returns nullopt after printing help.
std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out);

int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// parse_args + run with every failure mapped to an exit status.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace akkt::cli
