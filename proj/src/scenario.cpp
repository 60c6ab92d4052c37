#include "qkdenum/scenario.hpp"

#include <cmath>
#include <sstream>

namespace qkdenum {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string fmt(std::int64_t v) { return std::to_string(v); }

}  // namespace

std::vector<ValidationIssue> validate(const Scenario& s) {
  std::vector<ValidationIssue> issues;
  const auto add = [&](std::string field, std::string constraint, std::string value) {
    issues.push_back({std::move(field), std::move(constraint), std::move(value)});
  };

  const auto& src = s.source;
  if (!(src.lambda_s > 0.0)) add("lambda_s", "must be > 0", fmt(src.lambda_s));
  if (!(src.lambda_d >= 0.0)) add("lambda_d", "must be >= 0", fmt(src.lambda_d));
  if (!(src.lambda_d <= src.lambda_s)) {
    add("lambda_d", "must be <= lambda_s", fmt(src.lambda_d));
  }
  if (src.m_s < 1) add("m_s", "must be >= 1", fmt(src.m_s));
  if (src.m_d < 1) add("m_d", "must be >= 1", fmt(src.m_d));
  if (src.m_v < 0) add("m_v", "must be >= 0", fmt(src.m_v));

  const auto& link = s.link;
  if (!(link.alpha > 0.0)) add("alpha", "must be > 0", fmt(link.alpha));
  if (!(link.l_total > 0.0)) add("l_total", "must be > 0", fmt(link.l_total));
  if (!(link.eve_fraction > 0.0 && link.eve_fraction < 1.0)) {
    add("eve_fraction", "must be in (0,1)", fmt(link.eve_fraction));
  } else if (link.l_total > 0.0) {
    // both derived lengths positive and summing back exactly
    if (!(link.l_ae() > 0.0 && link.l_eb() > 0.0 && link.l_ae() + link.l_eb() == link.l_total)) {
      add("eve_fraction", "must split l_total into two positive segments", fmt(link.eve_fraction));
    }
  }

  const auto& rx = s.receiver;
  if (!(rx.p_pl >= 0.0 && rx.p_pl <= 1.0)) add("p_pl", "must be in [0,1]", fmt(rx.p_pl));
  if (!(rx.eta_pd > 0.0 && rx.eta_pd <= 1.0)) add("eta_pd", "must be in (0,1]", fmt(rx.eta_pd));
  if (!(rx.alpha_sift >= 0.0 && rx.alpha_sift < 1.0)) {
    add("alpha_sift", "must be in [0,1)", fmt(rx.alpha_sift));
  }
  if (!(rx.alpha_err >= 0.0 && rx.alpha_err < 1.0)) {
    add("alpha_err", "must be in [0,1)", fmt(rx.alpha_err));
  }

  if (s.truncation_order < 2) {
    add("truncation_order", "must be >= 2", fmt(static_cast<std::int64_t>(s.truncation_order)));
  }
  return issues;
}

namespace {

std::string join_messages(const std::vector<ValidationIssue>& issues) {
  std::string out = "invalid scenario:";
  for (const auto& issue : issues) out += "\n  - " + issue.message();
  return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join_messages(issues)), issues_(std::move(issues)) {}

const Scenario& ensure_valid(const Scenario& scenario) {
  auto issues = validate(scenario);
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return scenario;
}

Scenario baseline_scenario() {
  Scenario s;
  s.source = {0.5, 0.2, 1000000, 500000, 10000};
  s.link = {0.2, 50.0, 0.5};
  s.receiver = {0.5, 0.3, 0.2, 0.2};
  s.truncation_order = 4;
  return s;
}

}  // namespace qkdenum
