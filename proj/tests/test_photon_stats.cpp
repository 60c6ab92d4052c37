#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qkdenum/photon_stats.hpp"

using namespace qkdenum;
using doctest::Approx;

TEST_CASE("poisson_pmf basic values") {
  CHECK(poisson_pmf(0.0, 0) == 1.0);
  CHECK(poisson_pmf(0.0, 3) == 0.0);
  // direct closed-form evaluations
  CHECK(poisson_pmf(0.5, 1) == Approx(0.5 * std::exp(-0.5)).epsilon(1e-13));
  CHECK(poisson_pmf(0.5, 1) == Approx(0.3033).epsilon(2e-4));
  CHECK(poisson_pmf(0.2, 2) == Approx(0.02 * std::exp(-0.2)).epsilon(1e-13));
  CHECK(std::abs(poisson_pmf(0.2, 2) - 0.0164) < 5e-5);
}

TEST_CASE("poisson_pmf domain errors") {
  CHECK_THROWS_AS(poisson_pmf(-0.1, 0), std::domain_error);
  CHECK_THROWS_AS(poisson_pmf(1.0, -1), std::domain_error);
}

TEST_CASE("poisson_pmf stays finite and accurate at large counts") {
  // independent route: upward recurrence from P(0)
  const double mean = 100.0;
  double expected = std::exp(-mean);
  for (int j = 1; j <= 170; ++j) {
    expected *= mean / j;
    CHECK(poisson_pmf(mean, j) == Approx(expected).epsilon(1e-9));
  }
  CHECK(std::isfinite(poisson_pmf(170.0, 170)));
  CHECK(poisson_pmf(1.0, 170) >= 0.0);
}

TEST_CASE("poisson_pmf recurrence property") {
  for (double mean : {0.3, 0.5, 1.0, 2.5}) {
    for (int j = 0; j < 60; ++j) {
      const double ratio = poisson_pmf(mean, j + 1) / poisson_pmf(mean, j);
      CHECK(ratio == Approx(mean / (j + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("emission_profile mass accounting") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mean_dist(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double mean = mean_dist(gen);
    for (int order : {2, 4, 8}) {
      const EmissionProfile profile = emission_profile(mean, order);
      double sum = profile.tail;
      for (double p : profile.probs) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(sum == Approx(1.0).epsilon(1e-12));
      CHECK(profile.tail >= 0.0);
      CHECK(profile.probs.size() == static_cast<std::size_t>(order) + 1);
    }
  }
}

TEST_CASE("emission_profile reference rows") {
  struct Row {
    double mean;
    double phi0, phi1, phi2;
    double tail_gt_1;
  };
  const Row rows[] = {
      {0.1, 0.9048, 0.0905, 0.0045, 0.0047},
      {0.5, 0.6065, 0.3033, 0.0758, 0.0902},
      {1.0, 0.3679, 0.3679, 0.1839, 0.2642},
  };
  for (const Row& row : rows) {
    const EmissionProfile profile = emission_profile(row.mean, 4);
    CHECK(std::abs(profile.probs[0] - row.phi0) < 5e-5);
    CHECK(std::abs(profile.probs[1] - row.phi1) < 5e-5);
    CHECK(std::abs(profile.probs[2] - row.phi2) < 5e-5);
    CHECK(std::abs((1.0 - profile.probs[0] - profile.probs[1]) - row.tail_gt_1) < 5e-5);
  }
  const EmissionProfile half = emission_profile(0.5, 4);
  CHECK(std::abs(half.probs[3] - 0.0126) < 5e-5);

  // the 0.2 row's beyond-one-photon mass: recomputed value, not the
  // published 0.0012 (which matches P(j > 2) = 0.0011, not P(j > 1))
  const EmissionProfile fifth = emission_profile(0.2, 4);
  const double tail_gt_1 = 1.0 - fifth.probs[0] - fifth.probs[1];
  CHECK(tail_gt_1 == Approx(0.017523096306421793).epsilon(1e-12));
  CHECK(std::abs(tail_gt_1 - 0.0176) < 1e-4);
  CHECK(std::abs(fifth.probs[0] - 0.8187) < 5e-5);
  CHECK(std::abs(fifth.probs[1] - 0.1637) < 5e-5);
  const double tail_gt_2 = tail_gt_1 - fifth.probs[2];
  CHECK(std::abs(tail_gt_2 - 0.0012) < 1e-4);
}

TEST_CASE("emission_profile preconditions") {
  CHECK_THROWS_AS(emission_profile(-1.0, 4), std::domain_error);
  CHECK_THROWS_AS(emission_profile(0.5, 1), std::invalid_argument);
}

TEST_CASE("fiber_segment attenuation law") {
  const FiberSegment seg = fiber_segment(0.2, 15.0);
  CHECK(seg.loss_db == Approx(3.0).epsilon(1e-12));
  CHECK(seg.rho == Approx(1.9952623149688795).epsilon(1e-12));
  CHECK(std::abs(seg.rho - 2.0) / 2.0 < 0.003);
  CHECK(seg.p_fl == Approx(0.49881276637272765).epsilon(1e-12));

  const FiberSegment zero = fiber_segment(0.2, 0.0);
  CHECK(zero.rho == 1.0);
  CHECK(zero.p_fl == 0.0);

  const FiberSegment fifty = fiber_segment(0.2, 50.0);
  CHECK(fifty.loss_db == Approx(10.0).epsilon(1e-12));
  CHECK(fifty.rho == Approx(10.0).epsilon(1e-12));
  CHECK(fifty.p_fl == Approx(0.9).epsilon(1e-12));

  CHECK_THROWS_AS(fiber_segment(0.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(fiber_segment(0.2, -1.0), std::domain_error);
}

TEST_CASE("fiber_segment closed form matches its own definition") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> alpha_dist(0.05, 1.0);
  std::uniform_real_distribution<double> length_dist(0.0, 120.0);
  for (int trial = 0; trial < 500; ++trial) {
    const FiberSegment seg = fiber_segment(alpha_dist(gen), length_dist(gen));
    CHECK(seg.rho == std::pow(10.0, seg.alpha * seg.length / 10.0));
    CHECK(seg.p_fl == Approx(1.0 - 1.0 / seg.rho).epsilon(1e-12));
    CHECK(seg.rho >= 1.0);
    CHECK(seg.p_fl >= 0.0);
    CHECK(seg.p_fl < 1.0);
  }
}

TEST_CASE("arrival_mean") {
  CHECK(arrival_mean(100.0, 10.0) == 10.0);
  CHECK(arrival_mean(100.0, 1.0) == 100.0);
  CHECK(arrival_mean(100.0, 100.0) == 1.0);
  CHECK_THROWS_AS(arrival_mean(100.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(arrival_mean(-1.0, 2.0), std::domain_error);
}

TEST_CASE("loss-probability solver reproduces the reference cases") {
  CHECK(solve_photon_loss_prob(100.0, 50.0) == Approx(0.50).epsilon(1e-9));
  CHECK(solve_photon_loss_prob(100.0, 10.0) == Approx(0.90).epsilon(1e-9));
  // rho = 100: the closed form gives 0.99
  CHECK(solve_photon_loss_prob(100.0, 1.0) == Approx(0.99).epsilon(1e-9));
}

TEST_CASE("solver agrees with the closed form across the grid") {
  for (double lambda : {1.0, 10.0, 100.0}) {
    for (double rho : {1.5, 2.0, 10.0, 100.0}) {
      const double solved = solve_photon_loss_prob(lambda, lambda / rho);
      CHECK(std::abs(solved - (1.0 - 1.0 / rho)) < 1e-9);
    }
  }
}

TEST_CASE("solver domain errors") {
  CHECK_THROWS_AS(solve_photon_loss_prob(100.0, 101.0), std::domain_error);
  CHECK_THROWS_AS(solve_photon_loss_prob(100.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(solve_photon_loss_prob(0.0, 0.0), std::domain_error);
  // lossless boundary: root at zero
  CHECK(std::abs(solve_photon_loss_prob(100.0, 100.0)) < 1e-9);
}

TEST_CASE("p_fl strictly increases with length") {
  double previous = -1.0;
  for (double length : {0.0, 5.0, 10.0, 25.0, 50.0, 75.0, 100.0}) {
    const double p_fl = fiber_segment(0.2, length).p_fl;
    CHECK(p_fl > previous);
    previous = p_fl;
  }
  // same monotonicity through the numerical route
  double prev_solved = -1.0;
  for (double length : {5.0, 25.0, 50.0}) {
    const double rho = fiber_segment(0.2, length).rho;
    const double solved = solve_photon_loss_prob(50.0, arrival_mean(50.0, rho));
    CHECK(solved > prev_solved);
    prev_solved = solved;
  }
}
