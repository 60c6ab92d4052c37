#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qkdenum/design.hpp"

using namespace qkdenum;
using doctest::Approx;

namespace {

SweepSpec decoy_sweep(std::vector<double> values) {
  SweepSpec spec;
  spec.base = baseline_scenario();
  spec.axis = SweepAxis::lambda_d;
  spec.values = std::move(values);
  return spec;
}

}  // namespace

TEST_CASE("single-point sweep equals a direct evaluation") {
  const auto rows = sweep(decoy_sweep({0.2}));
  REQUIRE(rows.size() == 1);
  const Metrics direct = metrics(baseline_scenario());
  CHECK(rows[0].axis_value == 0.2);
  CHECK(rows[0].metrics.r_k == direct.r_k);
  CHECK(*rows[0].metrics.rho_e_sd == *direct.rho_e_sd);
  CHECK(*rows[0].metrics.rho_y_sd == *direct.rho_y_sd);
}

TEST_CASE("decoy-mean sweep reproduces the reference table") {
  struct Printed {
    double lambda_d, rho_e, rho_y;
  };
  const Printed printed[] = {
      {0.01, 4585.16, 2436.84}, {0.05, 184.57, 97.57}, {0.10, 46.51, 24.42},
      {0.15, 20.84, 10.87},     {0.20, 11.82, 6.13},   {0.30, 5.35, 2.74},
      {0.40, 3.06, 1.55},       {0.50, 2.0, 1.0},
  };
  const auto rows = sweep(decoy_sweep(default_decoy_grid()));
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(rows[i].axis_value == printed[i].lambda_d);
    REQUIRE(rows[i].metrics.rho_e_sd.has_value());
    CHECK(std::abs(*rows[i].metrics.rho_e_sd - printed[i].rho_e) / printed[i].rho_e < 5e-3);
    CHECK(std::abs(*rows[i].metrics.rho_y_sd - printed[i].rho_y) / printed[i].rho_y < 5e-3);
    CHECK(std::abs(rows[i].metrics.r_k - 6.08e-5) / 6.08e-5 < 5e-3);
  }
  // the rate column is genuinely constant: the signal path never sees lambda_d
  for (const SweepRow& row : rows) CHECK(row.metrics.r_k == rows[0].metrics.r_k);
  // both ratio columns fall monotonically
  for (std::size_t i = 1; i < 8; ++i) {
    CHECK(*rows[i].metrics.rho_e_sd < *rows[i - 1].metrics.rho_e_sd);
    CHECK(*rows[i].metrics.rho_y_sd < *rows[i - 1].metrics.rho_y_sd);
  }
}

TEST_CASE("length sweep: halving the rate ratio window") {
  SweepSpec spec;
  spec.base = baseline_scenario();
  spec.axis = SweepAxis::l_total;
  spec.values = {50.0, 100.0};
  const auto rows = sweep(spec);
  REQUIRE(rows.size() == 2);
  const double ratio = rows[0].metrics.r_k / rows[1].metrics.r_k;
  CHECK(ratio == Approx(31.101755773083092).epsilon(1e-9));
  CHECK(std::abs(ratio - 31.0) / 31.0 < 0.10);
}

TEST_CASE("log-rate is affine in length") {
  SweepSpec spec;
  spec.base = baseline_scenario();
  spec.axis = SweepAxis::l_total;
  spec.values = {30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0};
  const auto rows = sweep(spec);
  std::vector<double> slopes;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double rise =
          std::log10(rows[j].metrics.r_k) - std::log10(rows[i].metrics.r_k);
      slopes.push_back(rise / (rows[j].axis_value - rows[i].axis_value));
    }
  }
  for (double a : slopes) {
    for (double b : slopes) {
      CHECK(std::abs(a - b) / std::abs(b) <= 0.10);
    }
  }
}

TEST_CASE("detectability ratios stay inside the published bands") {
  SweepSpec spec;
  spec.base = baseline_scenario();
  spec.axis = SweepAxis::l_total;
  for (double l = 10.0; l <= 100.0; l += 5.0) spec.values.push_back(l);
  for (const SweepRow& row : sweep(spec)) {
    CHECK(*row.metrics.rho_e_sd >= 10.0);
    CHECK(*row.metrics.rho_e_sd <= 13.0);
    CHECK(*row.metrics.rho_y_sd >= 5.0);
    CHECK(*row.metrics.rho_y_sd <= 7.0);
  }
}

TEST_CASE("sweep input validation") {
  CHECK_THROWS_AS(sweep(decoy_sweep({})), std::invalid_argument);
  CHECK_THROWS_AS(sweep(decoy_sweep({0.2, 0.2})), std::invalid_argument);
  CHECK_THROWS_AS(sweep(decoy_sweep({0.3, 0.1})), std::invalid_argument);
  // an axis value that breaks scenario validation is reported with the value
  try {
    sweep(decoy_sweep({0.9}));
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string message = e.what();
    CHECK(message.find("0.9") != std::string::npos);
    CHECK(message.find("lambda_d") != std::string::npos);
  }
}

TEST_CASE("decoy mean selection follows the published choices") {
  const Scenario base = baseline_scenario();
  const DesignConstraints defaults;
  const SelectionReport report = select_decoy_mean(base, defaults, default_decoy_grid());
  CHECK(report.feasible);
  REQUIRE(report.recommended.has_value());
  CHECK(*report.recommended == 0.2);
  REQUIRE(report.most_clutter_feasible.has_value());
  CHECK(*report.most_clutter_feasible == 0.3);
  REQUIRE(report.table.size() == 8);
  // the published bold row is feasible; its neighbours fail one constraint each
  CHECK(report.table[4].feasible);
  CHECK_FALSE(report.table[3].eve_ok);    // lambda_d = 0.15: rho_e_sd = 20.84 > 12
  CHECK(report.table[3].yield_ok);
  CHECK_FALSE(report.table[6].yield_ok);  // lambda_d = 0.40: rho_y_sd = 1.55 < 2
  CHECK(report.table[6].eve_ok);

  const SelectionReport tight =
      select_decoy_mean(base, DesignConstraints{2.0, 6.0}, default_decoy_grid());
  CHECK(tight.feasible);
  CHECK(*tight.recommended == 0.3);
  CHECK(*tight.most_clutter_feasible == 0.3);
}

TEST_CASE("selection reports infeasibility instead of falling back silently") {
  const Scenario base = baseline_scenario();

  // below the scale-law floor m_s/m_d = 2: unattainable for any grid
  const SelectionReport impossible =
      select_decoy_mean(base, DesignConstraints{2.0, 1.5}, default_decoy_grid());
  CHECK_FALSE(impossible.feasible);
  CHECK_FALSE(impossible.recommended.has_value());
  CHECK(impossible.infeasibility_reason.find("scale-law") != std::string::npos);
  CHECK(impossible.infeasibility_reason.find("m_s/m_d") != std::string::npos);

  // constraints that no grid point satisfies even above the floor
  const SelectionReport empty_window =
      select_decoy_mean(base, DesignConstraints{100.0, 3.0}, default_decoy_grid());
  CHECK_FALSE(empty_window.feasible);
  CHECK(empty_window.table.size() == 8);
  CHECK_FALSE(empty_window.infeasibility_reason.empty());
}

TEST_CASE("selection input validation") {
  const Scenario base = baseline_scenario();
  CHECK_THROWS_AS(select_decoy_mean(base, DesignConstraints{}, {}), std::invalid_argument);
  CHECK_THROWS_AS(select_decoy_mean(base, DesignConstraints{}, {0.0, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(select_decoy_mean(base, DesignConstraints{}, {0.2, 0.9}),
                  std::invalid_argument);
  CHECK_THROWS_AS(select_decoy_mean(base, DesignConstraints{1.0, 12.0}, {0.2}),
                  std::invalid_argument);
}
