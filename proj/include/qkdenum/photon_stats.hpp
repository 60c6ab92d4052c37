#pragma once

#include <vector>

namespace qkdenum {

/// Poisson probability of emitting `count` photons in one slot given the
/// source mean. Evaluated in log space so large counts (up to a few hundred)
/// neither overflow nor underflow prematurely.
double poisson_pmf(double mean, int count);

/// Truncated per-slot emission distribution for one source mean:
/// probs[j] = P(j photons emitted), j = 0..truncation_order, plus the
/// residual tail mass P(j > truncation_order).
struct EmissionProfile {
  double mean = 0.0;
  std::vector<double> probs;
  double tail = 0.0;
};

EmissionProfile emission_profile(double mean, int truncation_order);

/// One fiber span: attenuation law, linear power-loss ratio, and the
/// closed-form per-photon loss probability p_fl = 1 - 1/rho.
struct FiberSegment {
  double alpha = 0.0;    // dB/km
  double length = 0.0;   // km
  double loss_db = 0.0;  // alpha * length
  double rho = 1.0;      // 10^(loss_db/10), >= 1
  double p_fl = 0.0;     // per-photon loss probability
};

FiberSegment fiber_segment(double alpha, double length);

/// Mean received photon count n = lambda / rho.
double arrival_mean(double lambda, double rho);

/// Per-photon loss probability recovered numerically from the transmitted
/// and received means: finds the root p of
///   n = lambda - sum_mu P_lambda(mu) * sum_kappa kappa*C(mu,kappa)*p^kappa*(1-p)^(mu-kappa)
/// by bisection on [0,1] to absolute tolerance 1e-12. The outer sum is
/// truncated once the Poisson tail mass drops below 1e-15. This is the
/// independent numerical route; it must agree with FiberSegment::p_fl.
double solve_photon_loss_prob(double lambda, double received_mean);

}  // namespace qkdenum
