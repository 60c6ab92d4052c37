#include "qkdenum/photon_stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkdenum {

double poisson_pmf(double mean, int count) {
  if (!(mean >= 0.0)) {
    throw std::domain_error("poisson_pmf: mean must be >= 0; got " + std::to_string(mean));
  }
  if (count < 0) {
    throw std::domain_error("poisson_pmf: count must be >= 0; got " + std::to_string(count));
  }
  if (mean == 0.0) return count == 0 ? 1.0 : 0.0;
  if (count == 0) return std::exp(-mean);
  return std::exp(count * std::log(mean) - mean - std::lgamma(count + 1.0));
}

EmissionProfile emission_profile(double mean, int truncation_order) {
  if (!(mean >= 0.0)) {
    throw std::domain_error("emission_profile: mean must be >= 0");
  }
  if (truncation_order < 2) {
    throw std::invalid_argument("emission_profile: truncation_order must be >= 2");
  }
  EmissionProfile profile;
  profile.mean = mean;
  profile.probs.reserve(static_cast<std::size_t>(truncation_order) + 1);
  double sum = 0.0;
  for (int j = 0; j <= truncation_order; ++j) {
    const double p = poisson_pmf(mean, j);
    profile.probs.push_back(p);
    sum += p;
  }
  profile.tail = std::max(0.0, 1.0 - sum);
  return profile;
}

FiberSegment fiber_segment(double alpha, double length) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("fiber_segment: alpha must be > 0");
  }
  if (!(length >= 0.0)) {
    throw std::domain_error("fiber_segment: length must be >= 0");
  }
  FiberSegment seg;
  seg.alpha = alpha;
  seg.length = length;
  seg.loss_db = alpha * length;
  seg.rho = std::pow(10.0, seg.loss_db / 10.0);
  seg.p_fl = 1.0 - 1.0 / seg.rho;
  return seg;
}

double arrival_mean(double lambda, double rho) {
  if (!(lambda >= 0.0)) {
    throw std::domain_error("arrival_mean: lambda must be >= 0");
  }
  if (!(rho >= 1.0)) {
    throw std::domain_error("arrival_mean: rho must be >= 1 (fiber cannot amplify); got " +
                            std::to_string(rho));
  }
  return lambda / rho;
}

namespace {

// sum_kappa kappa * C(mu,kappa) p^kappa q^(mu-kappa), evaluated term by
// term. The recurrence runs outward from the distribution's mode so no
// p^kappa q^(mu-kappa) factor underflows on the way.
double binomial_loss_mean(int mu, double p) {
  const double q = 1.0 - p;
  if (p <= 0.0) return 0.0;
  if (q <= 0.0) return mu;
  int mode = static_cast<int>((mu + 1) * p);
  if (mode > mu) mode = mu;
  double log_mode = std::lgamma(mu + 1.0) - std::lgamma(mode + 1.0) -
                    std::lgamma(mu - mode + 1.0);
  if (mode > 0) log_mode += mode * std::log(p);
  if (mu - mode > 0) log_mode += (mu - mode) * std::log(q);
  const double at_mode = std::exp(log_mode);
  double total = mode * at_mode;
  double term = at_mode;
  for (int kappa = mode; kappa < mu; ++kappa) {
    term *= (static_cast<double>(mu - kappa) / (kappa + 1)) * (p / q);
    total += (kappa + 1) * term;
  }
  term = at_mode;
  for (int kappa = mode; kappa > 1; --kappa) {
    term *= (static_cast<double>(kappa) / (mu - kappa + 1)) * (q / p);
    total += (kappa - 1) * term;
  }
  return total;
}

// Expected number of photons lost per slot under per-photon loss
// probability p: sum over transmitted counts mu of P_lambda(mu) times the
// per-count loss mean, both sums evaluated term by term. The outer sum
// stops once the remaining Poisson mass is below 1e-15.
double expected_lost_photons(double lambda, double p) {
  double pois = std::exp(-lambda);  // P_lambda(0)
  double cumulative = pois;
  double total = 0.0;
  for (int mu = 1; cumulative < 1.0 - 1e-15 || mu <= 1; ++mu) {
    pois *= lambda / mu;  // P_lambda(mu)
    cumulative += pois;
    total += pois * binomial_loss_mean(mu, p);
    if (mu > 8 * (lambda + 10)) break;  // safety stop, unreachable in practice
  }
  return total;
}

}  // namespace

double solve_photon_loss_prob(double lambda, double received_mean) {
  if (!(lambda > 0.0)) {
    throw std::domain_error("solve_photon_loss_prob: lambda must be > 0");
  }
  if (!(received_mean > 0.0)) {
    throw std::domain_error("solve_photon_loss_prob: received mean must be > 0 (p_fl = 1 is "
                            "outside the model's valid range)");
  }
  if (received_mean > lambda) {
    throw std::domain_error("solve_photon_loss_prob: received mean exceeds transmitted mean");
  }

  // f(p) = lambda - E[lost photons](p) - n is monotone decreasing in p with
  // f(0) >= 0, so bisection on [0,1] always converges.
  const auto objective = [&](double p) {
    return lambda - expected_lost_photons(lambda, p) - received_mean;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (objective(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qkdenum
