#include "qkdenum/design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkdenum {

Scenario scenario_at(const SweepSpec& spec, double value) {
  Scenario s = spec.base;
  switch (spec.axis) {
    case SweepAxis::lambda_d:
      s.source.lambda_d = value;
      break;
    case SweepAxis::l_total:
      s.link.l_total = value;
      break;
  }
  return s;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (spec.values.empty()) {
    throw std::invalid_argument("sweep: values must be nonempty");
  }
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) {
      throw std::invalid_argument("sweep: values must be strictly increasing");
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(spec.values.size());
  for (double value : spec.values) {
    SweepRow row;
    row.axis_value = value;
    row.scenario = scenario_at(spec, value);
    try {
      row.metrics = metrics(row.scenario);
    } catch (const ScenarioError& e) {
      throw std::invalid_argument("sweep: axis value " + std::to_string(value) +
                                  " yields an invalid scenario: " + e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> default_decoy_grid() {
  return {0.01, 0.05, 0.10, 0.15, 0.20, 0.30, 0.40, 0.50};
}

SelectionReport select_decoy_mean(const Scenario& base, const DesignConstraints& constraints,
                                  const std::vector<double>& grid) {
  if (grid.empty()) {
    throw std::invalid_argument("select_decoy_mean: grid must be nonempty");
  }
  if (!(constraints.min_yield_ratio > 1.0)) {
    throw std::invalid_argument("select_decoy_mean: min_yield_ratio must be > 1");
  }
  for (double value : grid) {
    if (!(value > 0.0 && value <= base.source.lambda_s)) {
      throw std::invalid_argument("select_decoy_mean: grid values must lie in (0, lambda_s]");
    }
  }

  SelectionReport report;

  // Scale law: rho_e_sd = (m_s/m_d) * p_rx^es(2)/p_rx^ed(2) >= m_s/m_d for
  // lambda_d <= lambda_s, so a cap below m_s/m_d can never be met.
  const double slot_ratio = static_cast<double>(base.source.m_s) /
                            static_cast<double>(base.source.m_d);
  if (constraints.max_eve_ratio < slot_ratio) {
    report.feasible = false;
    report.infeasibility_reason =
        "max_eve_ratio " + std::to_string(constraints.max_eve_ratio) +
        " is below the scale-law lower bound m_s/m_d = " + std::to_string(slot_ratio) +
        "; rho_e_sd cannot fall below that ratio for lambda_d <= lambda_s";
    return report;
  }

  SweepSpec spec;
  spec.base = base;
  spec.axis = SweepAxis::lambda_d;
  spec.values = grid;
  std::sort(spec.values.begin(), spec.values.end());

  for (const SweepRow& row : sweep(spec)) {
    GridPointEval eval;
    eval.lambda_d = row.axis_value;
    eval.metrics = row.metrics;
    eval.yield_ok = row.metrics.rho_y_sd.has_value() &&
                    *row.metrics.rho_y_sd >= constraints.min_yield_ratio;
    eval.eve_ok = row.metrics.rho_e_sd.has_value() &&
                  *row.metrics.rho_e_sd <= constraints.max_eve_ratio;
    eval.feasible = eval.yield_ok && eval.eve_ok;
    report.table.push_back(eval);
  }

  // rho_e_sd decreases along lambda_d, so the first feasible point carries
  // the least decoy clutter (largest rho_e_sd) and the strongest yield
  // signature; the last feasible point is the most-clutter alternative.
  for (const GridPointEval& eval : report.table) {
    if (!eval.feasible) continue;
    if (!report.recommended) report.recommended = eval.lambda_d;
    report.most_clutter_feasible = eval.lambda_d;
  }
  report.feasible = report.recommended.has_value();
  if (!report.feasible) {
    report.infeasibility_reason =
        "no grid point satisfies rho_y_sd >= " + std::to_string(constraints.min_yield_ratio) +
        " and rho_e_sd <= " + std::to_string(constraints.max_eve_ratio);
  }
  return report;
}

}  // namespace qkdenum
