#include "qkdenum/enumeration.hpp"

#include <cmath>

#include "qkdenum/photon_stats.hpp"
#include "qkdenum/scenario_io.hpp"

namespace qkdenum {

namespace {

double binomial_coeff(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / i;
  return c;
}

}  // namespace

SurvivalProbs survival_probs(const Scenario& scenario) {
  ensure_valid(scenario);
  const FiberSegment ae = fiber_segment(scenario.link.alpha, scenario.link.l_ae());
  const FiberSegment eb = fiber_segment(scenario.link.alpha, scenario.link.l_eb());
  SurvivalProbs out;
  out.p_fl_ae = ae.p_fl;
  out.p_fl_eb = eb.p_fl;
  out.psi_ae = (1.0 - ae.p_fl) * (1.0 - scenario.receiver.p_pl);
  out.psi_eb = (1.0 - eb.p_fl) * (1.0 - scenario.receiver.p_pl);
  return out;
}

EveClassProbs reception_probs_at_eve(double mean, double psi_ae, int truncation_order) {
  if (!(mean >= 0.0)) throw std::domain_error("reception_probs_at_eve: mean must be >= 0");
  if (!(psi_ae >= 0.0 && psi_ae <= 1.0)) {
    throw std::domain_error("reception_probs_at_eve: psi_ae must be in [0,1]");
  }
  if (truncation_order < 2) {
    throw std::invalid_argument("reception_probs_at_eve: truncation_order must be >= 2");
  }
  EveClassProbs probs;
  for (int received = 2; received <= 4; ++received) {
    double total = 0.0;
    for (int sent = received; sent <= truncation_order; ++sent) {
      total += poisson_pmf(mean, sent) * binomial_coeff(sent, received) *
               std::pow(psi_ae, received) * std::pow(1.0 - psi_ae, sent - received);
    }
    probs.p[static_cast<std::size_t>(received - 2)] = total;
  }
  return probs;
}

EveReception eve_two_photon_counts(const Scenario& scenario, const EveClassProbs& signal,
                                   const EveClassProbs& decoy) {
  EveReception out;
  out.signal = signal;
  out.decoy = decoy;
  out.n_es_2 = static_cast<double>(scenario.source.m_s) * signal.at(2);
  out.n_ed_2 = static_cast<double>(scenario.source.m_d) * decoy.at(2);
  out.n_e_2 = out.n_es_2 + out.n_ed_2;
  return out;
}

PulseClassCounts bob_optical_counts(double slots, const EveClassProbs& eve, double psi_eb) {
  const double miss = 1.0 - psi_eb;
  PulseClassCounts out;
  out.by_class[0] = slots * eve.at(2) * psi_eb;
  out.by_class[1] = slots * eve.at(3) * (1.0 - miss * miss * miss);
  out.by_class[2] = slots * eve.at(4) * (1.0 - miss * miss * miss * miss);
  out.total = out.by_class[0] + out.by_class[1] + out.by_class[2];
  return out;
}

namespace {

// P(>=1 of n forwarded photons arrives and every arriving photon is
// detected): sum_{i=1..n} C(n,i) psi^i (1-psi)^(n-i) eta^i.
double detected_bracket(int photons, double psi, double eta) {
  double total = 0.0;
  for (int arrived = 1; arrived <= photons; ++arrived) {
    total += binomial_coeff(photons, arrived) * std::pow(psi, arrived) *
             std::pow(1.0 - psi, photons - arrived) * std::pow(eta, arrived);
  }
  return total;
}

}  // namespace

PulseClassCounts bob_photodetected_counts(double slots, const EveClassProbs& eve, double psi_eb,
                                          double eta_pd) {
  if (!(eta_pd > 0.0 && eta_pd <= 1.0)) {
    throw std::domain_error("bob_photodetected_counts: eta_pd must be in (0,1]");
  }
  PulseClassCounts out;
  out.by_class[0] = slots * eve.at(2) * psi_eb * eta_pd;
  out.by_class[1] = slots * eve.at(3) * detected_bracket(3, psi_eb, eta_pd);
  out.by_class[2] = slots * eve.at(4) * detected_bracket(4, psi_eb, eta_pd);
  out.total = out.by_class[0] + out.by_class[1] + out.by_class[2];
  return out;
}

double post_process(double photodetected_bits, double alpha_err, double alpha_sift) {
  if (!(alpha_err >= 0.0 && alpha_err < 1.0) || !(alpha_sift >= 0.0 && alpha_sift < 1.0)) {
    throw std::domain_error("post_process: loss factors must be in [0,1)");
  }
  return photodetected_bits * (1.0 - alpha_err) * (1.0 - alpha_sift);
}

ScenarioEnumeration enumerate_scenario(const Scenario& scenario) {
  ensure_valid(scenario);
  ScenarioEnumeration out;
  out.survival = survival_probs(scenario);
  const int order = scenario.truncation_order;

  const EveClassProbs signal_probs =
      reception_probs_at_eve(scenario.source.lambda_s, out.survival.psi_ae, order);
  const EveClassProbs decoy_probs =
      reception_probs_at_eve(scenario.source.lambda_d, out.survival.psi_ae, order);
  out.eve = eve_two_photon_counts(scenario, signal_probs, decoy_probs);

  const double m_s = static_cast<double>(scenario.source.m_s);
  const double m_d = static_cast<double>(scenario.source.m_d);
  const double psi_eb = out.survival.psi_eb;
  const double eta = scenario.receiver.eta_pd;
  out.bob.signal.optical = bob_optical_counts(m_s, signal_probs, psi_eb);
  out.bob.decoy.optical = bob_optical_counts(m_d, decoy_probs, psi_eb);
  out.bob.signal.photodetected = bob_photodetected_counts(m_s, signal_probs, psi_eb, eta);
  out.bob.decoy.photodetected = bob_photodetected_counts(m_d, decoy_probs, psi_eb, eta);

  out.n_err_sift = post_process(out.bob.signal.photodetected.total, scenario.receiver.alpha_err,
                                scenario.receiver.alpha_sift);

  Metrics& m = out.metrics;
  m.n_err_sift = out.n_err_sift;
  m.r_k = out.n_err_sift / static_cast<double>(scenario.total_slots());
  m.y_bs = out.bob.signal.optical.total / m_s;
  m.y_bd = out.bob.decoy.optical.total / m_d;
  if (m.y_bd > 0.0) m.rho_y_sd = m.y_bs / m.y_bd;
  if (out.eve.n_ed_2 > 0.0) m.rho_e_sd = out.eve.n_es_2 / out.eve.n_ed_2;

  out.digest = scenario_digest(scenario);
  return out;
}

Metrics metrics(const Scenario& scenario) { return enumerate_scenario(scenario).metrics; }

}  // namespace qkdenum
