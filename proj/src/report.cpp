#include "qkdenum/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "qkdenum/photon_stats.hpp"

namespace qkdenum {

namespace {

constexpr const char* kCrlf = "\r\n";

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string scientific3(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", value);
  return buf;
}

std::string compact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string opt_field(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string("undef");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(fields[i]);
  }
  line += kCrlf;
  return line;
}

std::string metrics_csv_header() {
  return csv_join({"lambda_s", "lambda_d", "l_total", "rho_e_sd", "rho_y_sd", "R_k", "y_bs",
                   "y_bd"});
}

std::string metrics_csv_row(const Scenario& scenario, const Metrics& m) {
  return csv_join({format_double(scenario.source.lambda_s), format_double(scenario.source.lambda_d),
                   format_double(scenario.link.l_total), opt_field(m.rho_e_sd),
                   opt_field(m.rho_y_sd), format_double(m.r_k), format_double(m.y_bs),
                   format_double(m.y_bd)});
}

nlohmann::json metrics_to_json(const Scenario& scenario, const Metrics& m) {
  nlohmann::json record{
      {"lambda_s", scenario.source.lambda_s},
      {"lambda_d", scenario.source.lambda_d},
      {"l_total", scenario.link.l_total},
      {"R_k", m.r_k},
      {"y_bs", m.y_bs},
      {"y_bd", m.y_bd},
      {"n_err_sift", m.n_err_sift},
  };
  record["rho_e_sd"] = m.rho_e_sd ? nlohmann::json(*m.rho_e_sd) : nlohmann::json(nullptr);
  record["rho_y_sd"] = m.rho_y_sd ? nlohmann::json(*m.rho_y_sd) : nlohmann::json(nullptr);
  return record;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  (void)spec;
  std::string out = metrics_csv_header();
  for (const SweepRow& row : rows) out += metrics_csv_row(row.scenario, row.metrics);
  return out;
}

std::string agreement_csv(const std::vector<AgreementReport>& reports) {
  std::string out = csv_join({"replication", "counter", "expected", "observed", "z", "pass"});
  for (const AgreementReport& report : reports) {
    for (const CounterCheck& check : report.checks) {
      out += csv_join({std::to_string(report.replication), check.name,
                       format_double(check.expected), std::to_string(check.observed),
                       check.z ? format_double(*check.z) : std::string(),
                       check.pass ? "true" : "false"});
    }
  }
  return out;
}

std::string table1_csv() {
  std::string out = csv_join({"l_km", "L_dB", "rho", "lambda", "n", "p_fl"});
  for (double l : {15.0, 50.0, 100.0}) {
    const FiberSegment seg = fiber_segment(0.2, l);
    const double lambda = 100.0;
    const double n = arrival_mean(lambda, seg.rho);
    const double p_fl = solve_photon_loss_prob(lambda, n);
    out += csv_join({fixed(l, 0), fixed(seg.loss_db, 0), fixed(seg.rho, 0), fixed(lambda, 0),
                     fixed(n, 0), fixed(p_fl, 2)});
  }
  return out;
}

std::string table2_csv() {
  std::string out = csv_join({"lambda", "phi_0", "phi_1", "phi_2", "phi_gt_1"});
  for (double lambda : {0.1, 0.2, 0.5, 1.0}) {
    const EmissionProfile profile = emission_profile(lambda, 4);
    const double tail_gt_1 = 1.0 - profile.probs[0] - profile.probs[1];
    out += csv_join({fixed(lambda, 1), fixed(profile.probs[0], 4), fixed(profile.probs[1], 4),
                     fixed(profile.probs[2], 4), fixed(tail_gt_1, 4)});
  }
  return out;
}

std::string table4_csv(const Scenario& baseline) {
  SweepSpec spec;
  spec.base = baseline;
  spec.axis = SweepAxis::lambda_d;
  spec.values = default_decoy_grid();
  std::string out = csv_join({"lambda_d", "rho_e_sd", "rho_y_sd", "R_k"});
  for (const SweepRow& row : sweep(spec)) {
    out += csv_join({fixed(row.axis_value, 2),
                     row.metrics.rho_e_sd ? fixed(*row.metrics.rho_e_sd, 2) : std::string("undef"),
                     row.metrics.rho_y_sd ? fixed(*row.metrics.rho_y_sd, 2) : std::string("undef"),
                     scientific3(row.metrics.r_k)});
  }
  return out;
}

namespace {

struct Extent {
  double lo = 0.0;
  double hi = 1.0;
};

Extent extent_of(const std::vector<SvgSeries>& series, bool take_y, bool log_scale) {
  Extent e{1e300, -1e300};
  for (const SvgSeries& s : series) {
    for (double v : take_y ? s.y : s.x) {
      const double t = log_scale ? std::log10(v) : v;
      e.lo = std::min(e.lo, t);
      e.hi = std::max(e.hi, t);
    }
  }
  if (e.lo > e.hi) e = {0.0, 1.0};
  if (e.hi == e.lo) {
    e.lo -= 0.5;
    e.hi += 0.5;
  }
  return e;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series,
                           bool log_y) {
  constexpr double width = 820.0, height = 520.0;
  constexpr double ml = 90.0, mr = 30.0, mt = 50.0, mb = 70.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  const Extent xe = extent_of(series, false, false);
  const Extent ye = extent_of(series, true, log_y);
  const auto px = [&](double x) { return ml + (x - xe.lo) / (xe.hi - xe.lo) * plot_w; };
  const auto py = [&](double y) {
    const double t = log_y ? std::log10(y) : y;
    return mt + (1.0 - (t - ye.lo) / (ye.hi - ye.lo)) * plot_h;
  };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + compact(width) + "\" height=\"" +
         compact(height) + "\" viewBox=\"0 0 " + compact(width) + " " + compact(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + compact(width / 2) + "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";
  svg += "<rect x=\"" + compact(ml) + "\" y=\"" + compact(mt) + "\" width=\"" + compact(plot_w) +
         "\" height=\"" + compact(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks: 6 even divisions
  for (int i = 0; i <= 5; ++i) {
    const double xv = xe.lo + (xe.hi - xe.lo) * i / 5.0;
    const double x = px(xv);
    svg += "<line x1=\"" + compact(x) + "\" y1=\"" + compact(mt + plot_h) + "\" x2=\"" +
           compact(x) + "\" y2=\"" + compact(mt + plot_h + 6) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + compact(x) + "\" y=\"" + compact(mt + plot_h + 22) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + compact(xv) +
           "</text>\n";
  }
  // y ticks: integer decades when log, 6 divisions otherwise
  if (log_y) {
    const int lo = static_cast<int>(std::ceil(ye.lo - 1e-9));
    const int hi = static_cast<int>(std::floor(ye.hi + 1e-9));
    for (int d = lo; d <= hi; ++d) {
      const double y = mt + (1.0 - (d - ye.lo) / (ye.hi - ye.lo)) * plot_h;
      svg += "<line x1=\"" + compact(ml - 6) + "\" y1=\"" + compact(y) + "\" x2=\"" + compact(ml) +
             "\" y2=\"" + compact(y) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + compact(ml - 10) + "\" y=\"" + compact(y + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" +
             std::to_string(d) + "</text>\n";
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double yv = ye.lo + (ye.hi - ye.lo) * i / 5.0;
      const double y = mt + (1.0 - static_cast<double>(i) / 5.0) * plot_h;
      svg += "<line x1=\"" + compact(ml - 6) + "\" y1=\"" + compact(y) + "\" x2=\"" + compact(ml) +
             "\" y2=\"" + compact(y) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + compact(ml - 10) + "\" y=\"" + compact(y + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + compact(yv) +
             "</text>\n";
    }
  }
  svg += "<text x=\"" + compact(ml + plot_w / 2) + "\" y=\"" + compact(height - 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + x_label +
         "</text>\n";
  svg += "<text x=\"24\" y=\"" + compact(mt + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 24 " + compact(mt + plot_h / 2) + ")\">" + y_label + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const SvgSeries& sr = series[s];
    std::string points;
    for (std::size_t i = 0; i < sr.x.size(); ++i) {
      if (i) points += ' ';
      points += compact(px(sr.x[i])) + "," + compact(py(sr.y[i]));
    }
    const char* color = kColors[s % 4];
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    // legend entry
    const double ly = mt + 16 + 18 * static_cast<double>(s);
    svg += "<line x1=\"" + compact(ml + plot_w - 150) + "\" y1=\"" + compact(ly) + "\" x2=\"" +
           compact(ml + plot_w - 120) + "\" y2=\"" + compact(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + compact(ml + plot_w - 112) + "\" y=\"" + compact(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + sr.label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

nlohmann::json manifest_to_json(const RunManifest& manifest) {
  nlohmann::json flags = nlohmann::json::object();
  for (const auto& [key, value] : manifest.flags) flags[key] = value;
  nlohmann::json doc{
      {"tool", manifest.tool},
      {"version", manifest.version},
      {"subcommand", manifest.subcommand},
      {"scenario_digest", manifest.scenario_digest},
      {"flags", flags},
      {"created_utc", manifest.created_utc},
  };
  if (manifest.seed) doc["seed"] = *manifest.seed;
  return doc;
}

}  // namespace qkdenum
