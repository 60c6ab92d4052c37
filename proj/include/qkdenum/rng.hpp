#pragma once

#include <array>
#include <cstdint>

namespace qkdenum::rng {

/// SplitMix64 step; used only to derive and expand seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream seed for one (replication, shard) pair. Part of the
/// reproducibility contract: tallies depend on (seed, replication, shard)
/// only, never on thread count.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t replication,
                                        std::uint64_t shard) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (replication + 0x6C62272E07BB0142ULL);
  h = splitmix64(s);
  s = h ^ (shard + 0x27220A95FE1DADF5ULL);
  return splitmix64(s);
}

/// xoshiro256++ (Blackman/Vigna, public domain), state expanded from the
/// stream seed with SplitMix64.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    for (auto& word : state_) word = splitmix64(seed);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace qkdenum::rng
