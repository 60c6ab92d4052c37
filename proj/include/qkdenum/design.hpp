#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkdenum/enumeration.hpp"
#include "qkdenum/scenario.hpp"

namespace qkdenum {

enum class SweepAxis { lambda_d, l_total };

struct SweepSpec {
  Scenario base;
  SweepAxis axis = SweepAxis::lambda_d;
  std::vector<double> values;  // nonempty, strictly increasing
};

struct SweepRow {
  double axis_value = 0.0;
  Scenario scenario;  // base with the axis value applied
  Metrics metrics;
};

/// Base scenario with one axis value applied.
Scenario scenario_at(const SweepSpec& spec, double value);

/// Evaluates the analytic pipeline at each axis value, base scenario
/// otherwise unchanged. Output order matches input order. A scenario
/// validation failure is reported with the offending axis value attached.
std::vector<SweepRow> sweep(const SweepSpec& spec);

/// Acceptability window for the decoy mean selection: the yield ratio must
/// make eavesdropping detectable, and Eve's signal-to-decoy two-photon
/// ratio must stay low enough that decoy clutter (100/rho_e_sd percent)
/// remains non-negligible.
struct DesignConstraints {
  double min_yield_ratio = 2.0;
  double max_eve_ratio = 12.0;
};

struct GridPointEval {
  double lambda_d = 0.0;
  Metrics metrics;
  bool yield_ok = false;
  bool eve_ok = false;
  bool feasible = false;
};

struct SelectionReport {
  std::vector<GridPointEval> table;
  std::optional<double> recommended;             // smallest-clutter feasible point
  std::optional<double> most_clutter_feasible;   // largest feasible lambda_d
  bool feasible = false;
  std::string infeasibility_reason;
};

/// Grid search over candidate decoy means. Feasible points satisfy both
/// constraints; the recommendation is the feasible point with the largest
/// rho_e_sd (least decoy clutter, hence the strongest yield-ratio
/// signature for detecting Eve). Returns an explicit infeasibility report
/// when no grid point qualifies.
SelectionReport select_decoy_mean(const Scenario& base, const DesignConstraints& constraints,
                                  const std::vector<double>& grid);

/// The Table-4 candidate grid.
std::vector<double> default_decoy_grid();

}  // namespace qkdenum
