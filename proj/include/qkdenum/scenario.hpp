#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qkdenum {

/// Pulse-source side of the link: per-slot mean photon counts and the slot
/// budget split between signal, decoy, and vacuum pulses.
struct SourceParams {
  double lambda_s = 0.5;       // mean photons per signal slot
  double lambda_d = 0.2;       // mean photons per decoy slot
  std::int64_t m_s = 1000000;  // signal slots
  std::int64_t m_d = 500000;   // decoy slots
  std::int64_t m_v = 10000;    // vacuum slots (key-rate denominator only)
};

/// Fiber geometry with the eavesdropper splitting the span in two.
struct LinkGeometry {
  double alpha = 0.2;         // dB/km
  double l_total = 50.0;      // km, Alice to Bob
  double eve_fraction = 0.5;  // fraction of l_total on the Alice->Eve side

  // eve_fraction * l_total snapped to the ulp grid of l_total (a sub-ulp
  // nudge), so the complement subtraction below is exact and
  // l_ae() + l_eb() == l_total holds in double arithmetic for every valid
  // geometry.
  double l_ae() const {
    const double raw = eve_fraction * l_total;
    if (!(l_total > 0.0)) return raw;
    const double grain = std::ldexp(1.0, std::ilogb(l_total) - 52);
    return std::round(raw / grain) * grain;
  }

  double l_eb() const { return l_total - l_ae(); }
};

struct ReceiverParams {
  double p_pl = 0.5;       // polarization-mismatch loss probability
  double eta_pd = 0.3;     // photodetector quantum efficiency
  double alpha_sift = 0.2; // sifting loss factor
  double alpha_err = 0.2;  // bit-detection / FEC loss factor
};

struct Scenario {
  SourceParams source;
  LinkGeometry link;
  ReceiverParams receiver;
  int truncation_order = 4;  // max photons per pulse kept by the analytic model

  std::int64_t total_slots() const {
    return source.m_s + source.m_d + source.m_v;
  }
};

struct ValidationIssue {
  std::string field;
  std::string constraint;  // e.g. "must be in (0,1)"
  std::string value;       // offending value, formatted

  std::string message() const { return field + " " + constraint + "; got " + value; }
};

/// Checks every scenario invariant and returns the complete list of
/// violations (empty when the scenario is valid).
std::vector<ValidationIssue> validate(const Scenario& scenario);

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Throws ScenarioError listing all violations; returns the scenario
/// untouched when valid.
const Scenario& ensure_valid(const Scenario& scenario);

/// The reference operating point: Table-3 receiver parameters, 50 km link
/// with the eavesdropper halfway, lambda_s = 0.5, lambda_d = 0.2,
/// m_s/m_d/m_v = 1e6/5e5/1e4.
Scenario baseline_scenario();

}  // namespace qkdenum
