#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdenum/enumeration.hpp"
#include "qkdenum/scenario.hpp"

namespace qkdenum {

enum class TruncationMode {
  match_analytic,  // pulses with more than truncation_order photons contribute nothing
  physical,        // every pulse passes through the PNS rule
};

struct McOptions {
  std::uint64_t seed = 0;
  int replications = 1;
  TruncationMode truncation_mode = TruncationMode::match_analytic;
  int slots_scale = 1;  // multiplies m_s and m_d for variance reduction
  int threads = 0;      // 0 = hardware concurrency
};

/// Integer event counters for one stream. Overflow classes hold pulses from
/// Eve receptions of more than four photons (physical mode only).
struct StreamCounters {
  std::uint64_t eve_two_photon = 0;
  std::array<std::uint64_t, 3> optical_by_class{};
  std::uint64_t optical_overflow = 0;
  std::uint64_t optical_total = 0;
  std::array<std::uint64_t, 3> photodetected_by_class{};
  std::uint64_t photodetected_overflow = 0;
  std::uint64_t photodetected_total = 0;
};

/// One replication's tally plus the realized metrics (counters divided by
/// the scaled slot counts). Ratio fields are empty when undefined.
struct McTally {
  int replication = 0;
  StreamCounters signal;
  StreamCounters decoy;
  std::uint64_t sifted_signal_bits = 0;

  double r_k = 0.0;
  double y_bs = 0.0;
  double y_bd = 0.0;
  std::optional<double> rho_y_sd;
  std::optional<double> rho_e_sd;

  std::string digest;  // scenario content hash
  int slots_scale = 1;
};

/// Event-by-event simulation of one replication: every slot draws its
/// emitted photon count, every photon survives or is lost on each segment
/// as an independent event, Eve applies the PNS rule to her received count,
/// and Bob's detection and post-processing losses are per-event Bernoulli
/// draws. Identical (scenario, seed, replication) gives a bit-identical
/// tally regardless of thread count.
McTally simulate_one(const Scenario& scenario, const McOptions& options, int replication);

/// All replications, indices 0..replications-1.
std::vector<McTally> simulate(const Scenario& scenario, const McOptions& options);

/// One counter's agreement check. Counters with expectation >= 25 get a
/// z-score (observed - expected)/sqrt(expected) tested at |z| <= 4; smaller
/// expectations are tested against the exact interval
/// [0, expected + 6*sqrt(expected + 1)].
struct CounterCheck {
  std::string name;
  double expected = 0.0;
  std::uint64_t observed = 0;
  std::optional<double> z;
  double upper_bound = 0.0;  // interval bound when z is absent
  bool pass = false;
};

struct AgreementReport {
  int replication = 0;
  std::vector<CounterCheck> checks;
  bool all_pass = false;
};

/// Checks every tallied counter against the analytic expectation scaled by
/// the tally's slots_scale. Both inputs must come from the same scenario.
AgreementReport compare(const ScenarioEnumeration& analytic, const McTally& tally);

}  // namespace qkdenum
