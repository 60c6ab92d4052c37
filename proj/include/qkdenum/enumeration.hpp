#pragma once

#include <array>
#include <optional>
#include <string>

#include "qkdenum/scenario.hpp"

namespace qkdenum {

/// Per-photon optical-domain survival probabilities of the two fiber
/// segments, each the product of fiber survival and polarization match.
struct SurvivalProbs {
  double psi_ae = 0.0;
  double psi_eb = 0.0;
  double p_fl_ae = 0.0;
  double p_fl_eb = 0.0;
};

SurvivalProbs survival_probs(const Scenario& scenario);

/// Probabilities that Eve receives exactly 2, 3, or 4 photons of one pulse
/// in the optical domain.
struct EveClassProbs {
  std::array<double, 3> p{};  // index k-2 holds P(exactly k photons received)

  double at(int photons) const { return p[static_cast<std::size_t>(photons - 2)]; }
};

/// p(k) = sum_{j=k..J} P_mean(j) * C(j,k) * psi_ae^k * (1-psi_ae)^(j-k) for
/// k = 2..4, transmissions truncated at J photons per pulse. Serves both
/// streams; pass the stream's mean.
EveClassProbs reception_probs_at_eve(double mean, double psi_ae, int truncation_order);

/// Expected two-photon pulse counts collected by Eve, per stream and total.
struct EveReception {
  EveClassProbs signal;
  EveClassProbs decoy;
  double n_es_2 = 0.0;
  double n_ed_2 = 0.0;
  double n_e_2 = 0.0;
};

EveReception eve_two_photon_counts(const Scenario& scenario, const EveClassProbs& signal,
                                   const EveClassProbs& decoy);

/// Expected pulse counts at Bob for one stream, split by the photon count
/// Eve received (class i originates from her (i+1)-photon receptions).
struct PulseClassCounts {
  std::array<double, 3> by_class{};
  double total = 0.0;

  double at(int cls) const { return by_class[static_cast<std::size_t>(cls - 1)]; }
};

/// Optical pulses reaching Bob: the split two-photon pulse forwards one
/// photon; three- and four-photon pulses are forwarded whole and count when
/// at least one photon arrives.
PulseClassCounts bob_optical_counts(double slots, const EveClassProbs& eve, double psi_eb);

/// Photodetected bits at Bob: an optical pulse yields a bit when every
/// arriving photon is detected, each independently with efficiency eta_pd.
PulseClassCounts bob_photodetected_counts(double slots, const EveClassProbs& eve,
                                          double psi_eb, double eta_pd);

/// Multiplicative sifting + FEC thinning of the photodetected signal bits.
double post_process(double photodetected_bits, double alpha_err, double alpha_sift);

struct BobStreamTally {
  PulseClassCounts optical;
  PulseClassCounts photodetected;
};

struct BobTally {
  BobStreamTally signal;
  BobStreamTally decoy;
};

/// Scalar outputs of one scenario evaluation. The two ratios are reported
/// as empty optionals when their denominators vanish (lambda_d = 0 or a
/// fully opaque channel), never as sentinel numbers.
struct Metrics {
  double n_err_sift = 0.0;  // post-sifting/FEC signal bits
  double r_k = 0.0;         // key bits per transmitted slot
  double y_bs = 0.0;        // signal yield at Bob
  double y_bd = 0.0;        // decoy yield at Bob
  std::optional<double> rho_y_sd;  // y_bs / y_bd
  std::optional<double> rho_e_sd;  // n_es_2 / n_ed_2
};

/// Full analytic pipeline for one scenario; the expected-count breakdown is
/// what the Monte Carlo oracle is checked against.
struct ScenarioEnumeration {
  SurvivalProbs survival;
  EveReception eve;
  BobTally bob;
  double n_err_sift = 0.0;
  Metrics metrics;
  std::string digest;  // scenario content hash, for oracle pairing
};

ScenarioEnumeration enumerate_scenario(const Scenario& scenario);

Metrics metrics(const Scenario& scenario);

}  // namespace qkdenum
