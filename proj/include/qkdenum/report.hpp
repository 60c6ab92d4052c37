#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkdenum/design.hpp"
#include "qkdenum/enumeration.hpp"
#include "qkdenum/monte_carlo.hpp"
#include "qkdenum/scenario.hpp"

namespace qkdenum {

/// Shortest round-trip decimal form of a double (stable across runs).
std::string format_double(double value);

/// RFC-4180 CSV: header row, CRLF line endings, fields quoted only when
/// needed. Ratio columns render "undef" when the value is undefined.
std::string csv_join(const std::vector<std::string>& fields);

std::string metrics_csv_header();
std::string metrics_csv_row(const Scenario& scenario, const Metrics& m);
nlohmann::json metrics_to_json(const Scenario& scenario, const Metrics& m);

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

std::string agreement_csv(const std::vector<AgreementReport>& reports);

/// Regression tables at the printed precision: ratios with two decimals,
/// rates in scientific notation with three significant digits.
std::string table1_csv();
std::string table2_csv();
std::string table4_csv(const Scenario& baseline);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal deterministic SVG line chart; log_y plots log10 of the values.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series,
                           bool log_y);

/// Provenance record written alongside every output file set.
struct RunManifest {
  std::string tool;
  std::string version;
  std::string subcommand;
  std::string scenario_digest;
  std::map<std::string, std::string> flags;
  std::optional<std::uint64_t> seed;
  std::string created_utc;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

}  // namespace qkdenum
