#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qkdenum/scenario.hpp"

namespace qkdenum {

/// Raised when a scenario document is structurally wrong (missing keys,
/// unknown keys, wrong types). Semantic violations go through validate().
class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict parse: the document must contain exactly the scenario schema --
/// objects "source", "link", "receiver" and integer "truncation_order",
/// with exactly the known field names inside each. Unknown or missing keys
/// are rejected. The result is parsed but not yet validated.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Parse + validate a scenario file. Throws ScenarioParseError or
/// ScenarioError.
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& scenario);

/// Content hash of the canonical (key-sorted, round-trip formatted) JSON
/// form, as a 16-hex-digit string. Stable under key reordering of the
/// source document.
std::string scenario_digest(const Scenario& scenario);

}  // namespace qkdenum
