#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace refagree {

/// SplitMix64 step; used for seeding and for deriving independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator so it plugs
/// into the <random> distributions. Cheap to construct, which matters
/// because the bootstrap builds one stream per (sample, institution).
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr RandomStream(std::uint64_t seed) noexcept : state_{} {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

/// Deterministic stream seed for a task identified by two indices under a
/// global seed. Distinct (a, b) pairs yield unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b) noexcept {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a * 0xD6E8FEB86659FD93ULL);
  h = splitmix64(s);
  s = h ^ (b * 0xA0761D6478BD642FULL);
  return splitmix64(s);
}

inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t a,
                                  std::uint64_t b) noexcept {
  return RandomStream(derive_seed(seed, a, b));
}

}  // namespace refagree

#include <random>

namespace refagree {

/// A stream plus the normal/uniform adaptors drawn from it. The normal
/// distribution caches its second variate, so it must live with the
/// stream it consumes.
struct RandomSource {
  explicit RandomSource(std::uint64_t seed) : engine(seed) {}
  explicit RandomSource(RandomStream stream) : engine(stream) {}

  double gaussian() { return normal(engine); }
  double uniform() { return unit(engine); }

  RandomStream engine;
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> unit{0.0, 1.0};
};

}  // namespace refagree
