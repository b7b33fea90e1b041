// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "akkt/certify.hpp"

namespace akkt {

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Multipliers& m);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const CertReport& r);
nlohmann::json to_json(const SequenceRecord& rec);
nlohmann::json to_json(const std::vector<SequenceRecord>& records);

/// Pretty-printed with sorted keys and a trailing newline. Non-finite
/// numbers serialize as null.
std::string dump_report(const nlohmann::json& doc);

}  // namespace akkt
