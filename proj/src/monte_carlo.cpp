#include "qkdenum/monte_carlo.hpp"

#include <atomic>
#include <climits>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qkdenum/photon_stats.hpp"
#include "qkdenum/rng.hpp"
#include "qkdenum/scenario_io.hpp"

namespace qkdenum {

namespace {

// Fixed shard plan: tallies are sums over shards, each shard owns a private
// RNG stream derived from (seed, replication, shard), so the merged result
// is independent of thread count and merge order.
constexpr int kShards = 256;

// Probability as a 64-bit comparison threshold: the event fires when a raw
// generator word is below it. p = 0 maps to "never" exactly; p = 1 is off
// by one part in 2^64, far below every tolerance in the model.
std::uint64_t bernoulli_threshold(double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return UINT64_MAX;
  return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

// Poisson CDF table for inversion on raw generator words. The final
// all-ones sentinel absorbs the sub-resolution tail so the walk always
// terminates.
std::vector<std::uint64_t> poisson_cdf(double mean) {
  std::vector<std::uint64_t> cdf;
  double pmf = std::exp(-mean);
  double cum = pmf;
  cdf.push_back(bernoulli_threshold(cum));
  for (int j = 1;; ++j) {
    pmf *= mean / j;
    const double next = cum + pmf;
    if (j > 2 && (next == cum || (pmf < 1e-20 && 1.0 - cum < 1e-18))) break;
    cum = next;
    cdf.push_back(bernoulli_threshold(cum));
  }
  cdf.push_back(UINT64_MAX);
  return cdf;
}

struct SlotConfig {
  std::uint64_t psi_ae = 0;
  std::uint64_t psi_eb = 0;
  std::uint64_t eta_pd = 0;
  std::uint64_t post_keep = 0;  // (1-alpha_err)(1-alpha_sift)
  int trunc_order = 4;
  bool match_analytic = true;
};

// Simulates `slots` slots of one stream with one RNG stream.
void run_slots(std::int64_t slots, const std::vector<std::uint64_t>& cdf, const SlotConfig& cfg,
               bool is_signal, rng::Xoshiro256pp& gen, StreamCounters& counters,
               std::uint64_t& sifted_bits) {
  const std::uint64_t* table = cdf.data();
  const std::uint64_t empty = table[0];
  const std::uint64_t psi_ae = cfg.psi_ae;
  const std::uint64_t psi_eb = cfg.psi_eb;
  const std::uint64_t eta_pd = cfg.eta_pd;
  const int last = static_cast<int>(cdf.size()) - 1;
  const int cap = cfg.match_analytic ? cfg.trunc_order : INT_MAX;
  for (std::int64_t slot = 0; slot < slots; ++slot) {
    const std::uint64_t u = gen.next();
    if (u < empty) continue;  // empty pulse

    int emitted = 1;
    while (emitted < last && u >= table[emitted]) ++emitted;
    if (emitted > cap) continue;

    // Alice -> Eve, photon by photon
    int received = 0;
    for (int i = 0; i < emitted; ++i) received += (gen.next() < psi_ae);
    if (received < 2) continue;  // PNS rule blocks empty and single-photon pulses

    int forwarded;
    if (received == 2) {
      ++counters.eve_two_photon;  // Eve keeps one photon, forwards the other
      forwarded = 1;
    } else {
      if (cfg.match_analytic && received > 4) continue;  // beyond the enumerated classes
      forwarded = received;
    }

    // Eve -> Bob
    int arrived = 0;
    for (int i = 0; i < forwarded; ++i) arrived += (gen.next() < psi_eb);
    if (arrived == 0) continue;

    ++counters.optical_total;
    if (received <= 4) {
      ++counters.optical_by_class[static_cast<std::size_t>(received - 2)];
    } else {
      ++counters.optical_overflow;
    }

    // a bit is retrieved only when every arriving photon is detected
    bool all_detected = true;
    for (int i = 0; i < arrived; ++i) all_detected &= (gen.next() < eta_pd);
    if (!all_detected) continue;

    ++counters.photodetected_total;
    if (received <= 4) {
      ++counters.photodetected_by_class[static_cast<std::size_t>(received - 2)];
    } else {
      ++counters.photodetected_overflow;
    }

    if (is_signal && gen.next() < cfg.post_keep) ++sifted_bits;
  }
}

void merge(StreamCounters& into, const StreamCounters& from) {
  into.eve_two_photon += from.eve_two_photon;
  for (std::size_t i = 0; i < 3; ++i) {
    into.optical_by_class[i] += from.optical_by_class[i];
    into.photodetected_by_class[i] += from.photodetected_by_class[i];
  }
  into.optical_overflow += from.optical_overflow;
  into.optical_total += from.optical_total;
  into.photodetected_overflow += from.photodetected_overflow;
  into.photodetected_total += from.photodetected_total;
}

std::int64_t shard_slice(std::int64_t total, int shard) {
  const std::int64_t base = total / kShards;
  const std::int64_t rem = total % kShards;
  return base + (shard < rem ? 1 : 0);
}

}  // namespace

McTally simulate_one(const Scenario& scenario, const McOptions& options, int replication) {
  ensure_valid(scenario);
  if (options.slots_scale < 1) {
    throw std::invalid_argument("simulate: slots_scale must be >= 1");
  }
  if (replication < 0) {
    throw std::invalid_argument("simulate: replication index must be >= 0");
  }

  const SurvivalProbs survival = survival_probs(scenario);
  SlotConfig cfg;
  cfg.psi_ae = bernoulli_threshold(survival.psi_ae);
  cfg.psi_eb = bernoulli_threshold(survival.psi_eb);
  cfg.eta_pd = bernoulli_threshold(scenario.receiver.eta_pd);
  cfg.post_keep = bernoulli_threshold((1.0 - scenario.receiver.alpha_err) *
                                      (1.0 - scenario.receiver.alpha_sift));
  cfg.trunc_order = scenario.truncation_order;
  cfg.match_analytic = options.truncation_mode == TruncationMode::match_analytic;

  const std::vector<std::uint64_t> signal_cdf = poisson_cdf(scenario.source.lambda_s);
  const std::vector<std::uint64_t> decoy_cdf = poisson_cdf(scenario.source.lambda_d);
  const std::int64_t signal_slots = scenario.source.m_s * options.slots_scale;
  const std::int64_t decoy_slots = scenario.source.m_d * options.slots_scale;

  unsigned thread_count = options.threads > 0
                              ? static_cast<unsigned>(options.threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<unsigned>(thread_count, kShards);

  McTally tally;
  tally.replication = replication;
  tally.slots_scale = options.slots_scale;
  tally.digest = scenario_digest(scenario);

  std::atomic<int> next_shard{0};
  std::vector<McTally> partials(thread_count);
  std::vector<std::thread> workers;
  workers.reserve(thread_count);
  const auto worker = [&](unsigned worker_index) {
    McTally& local = partials[worker_index];
    for (;;) {
      const int shard = next_shard.fetch_add(1, std::memory_order_relaxed);
      if (shard >= kShards) break;
      rng::Xoshiro256pp gen(
          rng::derive_stream_seed(options.seed, static_cast<std::uint64_t>(replication),
                                  static_cast<std::uint64_t>(shard)));
      std::uint64_t sift = 0;
      run_slots(shard_slice(signal_slots, shard), signal_cdf, cfg, true, gen, local.signal, sift);
      run_slots(shard_slice(decoy_slots, shard), decoy_cdf, cfg, false, gen, local.decoy, sift);
      local.sifted_signal_bits += sift;
    }
  };
  if (thread_count == 1) {
    worker(0);
  } else {
    for (unsigned t = 0; t < thread_count; ++t) workers.emplace_back(worker, t);
    for (auto& w : workers) w.join();
  }
  for (const McTally& partial : partials) {
    merge(tally.signal, partial.signal);
    merge(tally.decoy, partial.decoy);
    tally.sifted_signal_bits += partial.sifted_signal_bits;
  }

  const double scale = static_cast<double>(options.slots_scale);
  tally.y_bs = static_cast<double>(tally.signal.optical_total) /
               (static_cast<double>(scenario.source.m_s) * scale);
  tally.y_bd = static_cast<double>(tally.decoy.optical_total) /
               (static_cast<double>(scenario.source.m_d) * scale);
  tally.r_k = static_cast<double>(tally.sifted_signal_bits) /
              (static_cast<double>(scenario.total_slots()) * scale);
  if (tally.decoy.optical_total > 0) tally.rho_y_sd = tally.y_bs / tally.y_bd;
  if (tally.decoy.eve_two_photon > 0) {
    tally.rho_e_sd = static_cast<double>(tally.signal.eve_two_photon) /
                     static_cast<double>(tally.decoy.eve_two_photon);
  }
  return tally;
}

std::vector<McTally> simulate(const Scenario& scenario, const McOptions& options) {
  if (options.replications < 1) {
    throw std::invalid_argument("simulate: replications must be >= 1");
  }
  std::vector<McTally> tallies;
  tallies.reserve(static_cast<std::size_t>(options.replications));
  for (int rep = 0; rep < options.replications; ++rep) {
    tallies.push_back(simulate_one(scenario, options, rep));
  }
  return tallies;
}

namespace {

CounterCheck check_counter(std::string name, double expected, std::uint64_t observed) {
  CounterCheck check;
  check.name = std::move(name);
  check.expected = expected;
  check.observed = observed;
  if (expected >= 25.0) {
    const double z = (static_cast<double>(observed) - expected) / std::sqrt(expected);
    check.z = z;
    check.pass = std::abs(z) <= 4.0;
  } else {
    check.upper_bound = expected + 6.0 * std::sqrt(expected + 1.0);
    check.pass = static_cast<double>(observed) <= check.upper_bound;
  }
  return check;
}

void check_stream(std::vector<CounterCheck>& checks, const std::string& prefix,
                  const StreamCounters& observed, double eve_two_expected,
                  const PulseClassCounts& optical, const PulseClassCounts& photodetected,
                  double scale) {
  checks.push_back(check_counter(prefix + ".eve_two_photon", eve_two_expected * scale,
                                 observed.eve_two_photon));
  for (int cls = 1; cls <= 3; ++cls) {
    checks.push_back(check_counter(prefix + ".optical_" + std::to_string(cls),
                                   optical.at(cls) * scale,
                                   observed.optical_by_class[static_cast<std::size_t>(cls - 1)]));
  }
  checks.push_back(check_counter(prefix + ".optical_overflow", 0.0, observed.optical_overflow));
  checks.push_back(
      check_counter(prefix + ".optical_total", optical.total * scale, observed.optical_total));
  for (int cls = 1; cls <= 3; ++cls) {
    checks.push_back(
        check_counter(prefix + ".photodetected_" + std::to_string(cls),
                      photodetected.at(cls) * scale,
                      observed.photodetected_by_class[static_cast<std::size_t>(cls - 1)]));
  }
  checks.push_back(check_counter(prefix + ".photodetected_overflow", 0.0,
                                 observed.photodetected_overflow));
  checks.push_back(check_counter(prefix + ".photodetected_total", photodetected.total * scale,
                                 observed.photodetected_total));
}

}  // namespace

AgreementReport compare(const ScenarioEnumeration& analytic, const McTally& tally) {
  if (analytic.digest != tally.digest) {
    throw std::invalid_argument(
        "compare: analytic expectations and tally come from different scenarios");
  }
  AgreementReport report;
  report.replication = tally.replication;
  const double scale = static_cast<double>(tally.slots_scale);
  check_stream(report.checks, "signal", tally.signal, analytic.eve.n_es_2,
               analytic.bob.signal.optical, analytic.bob.signal.photodetected, scale);
  check_stream(report.checks, "decoy", tally.decoy, analytic.eve.n_ed_2,
               analytic.bob.decoy.optical, analytic.bob.decoy.photodetected, scale);
  report.checks.push_back(
      check_counter("sifted_signal_bits", analytic.n_err_sift * scale, tally.sifted_signal_bits));
  report.all_pass = true;
  for (const CounterCheck& check : report.checks) report.all_pass &= check.pass;
  return report;
}

}  // namespace qkdenum
