// SPDX-License-Identifier: Apache-2.0

#include "akkt/report.hpp"

namespace akkt {

using nlohmann::json;

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Multipliers& m) {
  return {{"lambda", to_json(m.lambda)}, {"mu", to_json(m.mu)}, {"tau", to_json(m.tau)}};
}

json to_json(const Verdict& v) {
  json ev = json::object();
  for (const auto& [k, x] : v.evidence) ev[k] = x;
  json out = {{"name", v.name},
              {"outcome", to_string(v.outcome)},
              {"tolerance", v.tolerance},
              {"evidence", ev}};
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

json to_json(const CertReport& r) {
  json a = json::array();
  for (const auto& v : r.verdicts) a.push_back(to_json(v));
  return a;
}

json to_json(const SequenceRecord& rec) {
  return {{"k", rec.k},
          {"x", to_json(rec.x)},
          {"multipliers", to_json(rec.mult)},
          {"branch_signs", rec.branch_signs},
          {"residual_m", rec.residual},
          {"residual_m_prime", rec.residual_prime},
          {"feasibility", {{"inequality", rec.feasibility.inequality},
                           {"equality", rec.feasibility.equality},
                           {"aggregate", rec.feasibility.aggregate}}},
          {"phi", rec.phi},
          {"penalty_value", rec.penalty_value},
          {"e2", rec.e2},
          {"stationarity", rec.stationarity},
          {"distance", rec.distance},
          {"iterations", rec.iterations},
          {"flagged", rec.flagged},
          {"status", rec.status}};
}

json to_json(const std::vector<SequenceRecord>& records) {
  json a = json::array();
  for (const auto& r : records) a.push_back(to_json(r));
  return a;
}

std::string dump_report(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace akkt
