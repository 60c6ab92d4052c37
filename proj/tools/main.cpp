#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkdenum/design.hpp"
#include "qkdenum/enumeration.hpp"
#include "qkdenum/monte_carlo.hpp"
#include "qkdenum/report.hpp"
#include "qkdenum/scenario_io.hpp"
#include "qkdenum/version.hpp"

namespace fs = std::filesystem;
using namespace qkdenum;

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const Scenario& scenario,
                    const std::map<std::string, std::string>& flags,
                    std::optional<std::uint64_t> seed) {
  RunManifest manifest;
  manifest.tool = kToolName;
  manifest.version = kVersion;
  manifest.subcommand = subcommand;
  manifest.scenario_digest = scenario_digest(scenario);
  manifest.flags = flags;
  manifest.seed = seed;
  manifest.created_utc = utc_now();
  write_file(dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
}

std::string short_ratio(const std::optional<double>& v) {
  if (!v) return "undef";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

std::string short_rate(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

int run_evaluate(const Scenario& scenario, const std::optional<fs::path>& out_dir,
                 const std::map<std::string, std::string>& flags) {
  const Metrics m = metrics(scenario);
  std::cout << "scenario " << scenario_digest(scenario) << "\n";
  std::cout << "rho_e_sd = " << short_ratio(m.rho_e_sd) << "\n";
  std::cout << "rho_y_sd = " << short_ratio(m.rho_y_sd) << "\n";
  std::cout << "R_k = " << short_rate(m.r_k) << "\n";
  std::cout << "y_bs = " << format_double(m.y_bs) << "\n";
  std::cout << "y_bd = " << format_double(m.y_bd) << "\n";
  std::cout << "n_err_sift = " << format_double(m.n_err_sift) << "\n";
  if (out_dir) {
    fs::create_directories(*out_dir);
    write_file(*out_dir / "metrics.csv", metrics_csv_header() + metrics_csv_row(scenario, m));
    write_file(*out_dir / "metrics.json", metrics_to_json(scenario, m).dump(2) + "\n");
    write_manifest(*out_dir, "evaluate", scenario, flags, std::nullopt);
  }
  return 0;
}

int run_sweep(const Scenario& scenario, const std::string& axis_name,
              const std::vector<double>& values, const fs::path& out_dir, bool svg,
              const std::map<std::string, std::string>& flags) {
  SweepSpec spec;
  spec.base = scenario;
  spec.values = values;
  if (axis_name == "lambda_d") {
    spec.axis = SweepAxis::lambda_d;
  } else if (axis_name == "l_total") {
    spec.axis = SweepAxis::l_total;
  } else {
    std::cerr << "error: --axis must be lambda_d or l_total\n";
    return 1;
  }
  const std::vector<SweepRow> rows = sweep(spec);
  fs::create_directories(out_dir);
  write_file(out_dir / "sweep.csv", sweep_csv(spec, rows));
  if (svg) {
    SvgSeries rk{"R_k", {}, {}};
    SvgSeries re{"rho_e_sd", {}, {}};
    SvgSeries ry{"rho_y_sd", {}, {}};
    for (const SweepRow& row : rows) {
      rk.x.push_back(row.axis_value);
      rk.y.push_back(row.metrics.r_k);
      if (row.metrics.rho_e_sd && row.metrics.rho_y_sd) {
        re.x.push_back(row.axis_value);
        re.y.push_back(*row.metrics.rho_e_sd);
        ry.x.push_back(row.axis_value);
        ry.y.push_back(*row.metrics.rho_y_sd);
      }
    }
    write_file(out_dir / "rk.svg",
               svg_line_chart("Key generation rate", axis_name, "R_k", {rk}, true));
    const bool wide = !re.y.empty() &&
                      *std::max_element(re.y.begin(), re.y.end()) >
                          50.0 * *std::min_element(re.y.begin(), re.y.end());
    write_file(out_dir / "ratios.svg",
               svg_line_chart("Signal-to-decoy ratios", axis_name, "ratio", {re, ry}, wide));
  }
  write_manifest(out_dir, "sweep", scenario, flags, std::nullopt);
  std::cout << "wrote " << (out_dir / "sweep.csv").string() << " (" << rows.size() << " rows)\n";
  return 0;
}

int run_simulate(const Scenario& scenario, const McOptions& options, const fs::path& out_dir,
                 const std::map<std::string, std::string>& flags) {
  const ScenarioEnumeration analytic = enumerate_scenario(scenario);
  const std::vector<McTally> tallies = simulate(scenario, options);
  std::vector<AgreementReport> reports;
  reports.reserve(tallies.size());
  int passing = 0;
  for (const McTally& tally : tallies) {
    reports.push_back(compare(analytic, tally));
    passing += reports.back().all_pass ? 1 : 0;
  }
  const int needed = (29 * options.replications + 29) / 30;  // ceil(29R/30)

  fs::create_directories(out_dir);
  write_file(out_dir / "agreement.csv", agreement_csv(reports));
  nlohmann::json tallies_json = nlohmann::json::array();
  for (const McTally& tally : tallies) {
    tallies_json.push_back({
        {"replication", tally.replication},
        {"sifted_signal_bits", tally.sifted_signal_bits},
        {"signal_optical_total", tally.signal.optical_total},
        {"decoy_optical_total", tally.decoy.optical_total},
        {"signal_eve_two_photon", tally.signal.eve_two_photon},
        {"decoy_eve_two_photon", tally.decoy.eve_two_photon},
        {"R_k", tally.r_k},
        {"y_bs", tally.y_bs},
        {"y_bd", tally.y_bd},
        {"rho_y_sd", tally.rho_y_sd ? nlohmann::json(*tally.rho_y_sd) : nlohmann::json(nullptr)},
        {"rho_e_sd", tally.rho_e_sd ? nlohmann::json(*tally.rho_e_sd) : nlohmann::json(nullptr)},
    });
  }
  write_file(out_dir / "tally.json", tallies_json.dump(2) + "\n");
  write_manifest(out_dir, "simulate", scenario, flags, options.seed);

  for (const AgreementReport& report : reports) {
    std::cout << "replication " << report.replication << ": "
              << (report.all_pass ? "pass" : "FAIL");
    if (!report.all_pass) {
      for (const CounterCheck& check : report.checks) {
        if (!check.pass) {
          std::cout << "  [" << check.name << " expected=" << format_double(check.expected)
                    << " observed=" << check.observed
                    << (check.z ? " z=" + format_double(*check.z) : "") << "]";
        }
      }
    }
    std::cout << "\n";
  }
  std::cout << passing << "/" << options.replications << " replications pass (need " << needed
            << ")\n";
  return passing >= needed ? 0 : 2;
}

int run_design(const Scenario& scenario, const DesignConstraints& constraints,
               const std::vector<double>& grid, const std::optional<fs::path>& out_dir,
               const std::map<std::string, std::string>& flags) {
  const SelectionReport report = select_decoy_mean(scenario, constraints, grid);
  std::string csv = csv_join(
      {"lambda_d", "rho_e_sd", "rho_y_sd", "R_k", "yield_ok", "eve_ok", "feasible"});
  for (const GridPointEval& eval : report.table) {
    csv += csv_join({format_double(eval.lambda_d),
                     eval.metrics.rho_e_sd ? format_double(*eval.metrics.rho_e_sd)
                                           : std::string("undef"),
                     eval.metrics.rho_y_sd ? format_double(*eval.metrics.rho_y_sd)
                                           : std::string("undef"),
                     format_double(eval.metrics.r_k), eval.yield_ok ? "true" : "false",
                     eval.eve_ok ? "true" : "false", eval.feasible ? "true" : "false"});
  }
  if (out_dir) {
    fs::create_directories(*out_dir);
    write_file(*out_dir / "design.csv", csv);
    write_manifest(*out_dir, "design", scenario, flags, std::nullopt);
  }

  for (const GridPointEval& eval : report.table) {
    std::printf("lambda_d=%.3g  rho_e_sd=%s  rho_y_sd=%s  %s\n", eval.lambda_d,
                short_ratio(eval.metrics.rho_e_sd).c_str(),
                short_ratio(eval.metrics.rho_y_sd).c_str(),
                eval.feasible ? "feasible" : "infeasible");
  }
  if (!report.feasible) {
    std::cout << "infeasible: " << report.infeasibility_reason << "\n";
    return 2;
  }
  std::printf("recommended lambda_d = %.3g\n", *report.recommended);
  std::printf("most-clutter feasible lambda_d = %.3g\n", *report.most_clutter_feasible);
  return 0;
}

int run_tables(const Scenario& scenario, const fs::path& out_dir,
               const std::map<std::string, std::string>& flags) {
  fs::create_directories(out_dir);
  write_file(out_dir / "table1.csv", table1_csv());
  write_file(out_dir / "table2.csv", table2_csv());
  write_file(out_dir / "table4.csv", table4_csv(scenario));
  write_manifest(out_dir, "tables", scenario, flags, std::nullopt);
  std::cout << "wrote table1.csv, table2.csv, table4.csv to " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BB84 decoy-pulse QKD link model under a photon-number-splitting attack"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string scenario_path;
  std::string out_dir;
  std::string axis = "lambda_d";
  std::vector<double> values;
  std::uint64_t seed = 0;
  int replications = 1;
  int scale = 1;
  int threads = 0;
  std::string truncation = "match";
  bool svg = false;
  double min_yield_ratio = 2.0;
  double max_eve_ratio = 12.0;

  auto* evaluate = app.add_subcommand("evaluate", "print the analytic metrics for one scenario");
  evaluate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  evaluate->add_option("--out", out_dir, "output directory for metrics.csv/metrics.json");

  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the model along one axis");
  sweep_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  sweep_cmd->add_option("--axis", axis, "sweep axis: lambda_d or l_total");
  sweep_cmd->add_option("--values", values, "axis values, comma separated")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_cmd->add_flag("--svg", svg, "also emit SVG line charts");

  auto* simulate_cmd =
      app.add_subcommand("simulate", "run the event-by-event Monte Carlo oracle and compare");
  simulate_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  simulate_cmd->add_option("--seed", seed, "RNG seed");
  simulate_cmd->add_option("--replications", replications, "number of replications")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--scale", scale, "slot-count multiplier")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--truncation", truncation, "match or physical")
      ->check(CLI::IsMember({"match", "physical"}));
  simulate_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  simulate_cmd->add_option("--out", out_dir, "output directory")->required();

  auto* design_cmd = app.add_subcommand("design", "select a decoy mean from a candidate grid");
  design_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  design_cmd->add_option("--values", values, "candidate lambda_d grid (default: Table-4 grid)")
      ->delimiter(',');
  design_cmd->add_option("--min-yield-ratio", min_yield_ratio, "lower bound on rho_y_sd");
  design_cmd->add_option("--max-eve-ratio", max_eve_ratio, "upper bound on rho_e_sd");
  design_cmd->add_option("--out", out_dir, "output directory");

  auto* tables_cmd = app.add_subcommand("tables", "write the reference tables as CSV");
  tables_cmd->add_option("--scenario", scenario_path, "scenario JSON file (default: baseline)");
  tables_cmd->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::map<std::string, std::string> flags;
  for (const auto* opt : app.get_subcommands()[0]->get_options()) {
    if (opt->count() == 0) continue;
    std::string joined;
    for (const auto& r : opt->results()) {
      if (!joined.empty()) joined += ',';
      joined += r;
    }
    flags[opt->get_name()] = joined;
  }

  try {
    Scenario scenario = scenario_path.empty() ? baseline_scenario() : load_scenario(scenario_path);
    if (evaluate->parsed()) {
      return run_evaluate(scenario,
                          out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir), flags);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep(scenario, axis, values, out_dir, svg, flags);
    }
    if (simulate_cmd->parsed()) {
      McOptions options;
      options.seed = seed;
      options.replications = replications;
      options.slots_scale = scale;
      options.threads = threads;
      options.truncation_mode =
          truncation == "physical" ? TruncationMode::physical : TruncationMode::match_analytic;
      return run_simulate(scenario, options, out_dir, flags);
    }
    if (design_cmd->parsed()) {
      DesignConstraints constraints{min_yield_ratio, max_eve_ratio};
      const std::vector<double> grid = values.empty() ? default_decoy_grid() : values;
      return run_design(scenario, constraints, grid,
                        out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir), flags);
    }
    if (tables_cmd->parsed()) {
      return run_tables(scenario, out_dir, flags);
    }
  } catch (const ScenarioParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
