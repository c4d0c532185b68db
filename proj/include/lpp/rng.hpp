#pragma once

// Counter-based random streams.
//
// Every random quantity in the library is a pure function of a 64-bit key and
// a 128-bit counter, so a site weight, a sample seed or a TASEP clock can be
// regenerated in isolation and in any order. The block function is
// Philox4x32-10 (Salmon et al., SC'11).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace lpp {

using Philox4x32Block = std::array<std::uint32_t, 4>;

inline Philox4x32Block philox4x32(Philox4x32Block ctr, std::array<std::uint32_t, 2> key) noexcept {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Stream identifiers. Distinct uses of the same seed never share counters.
enum class Stream : std::uint32_t {
  kSiteWeight = 1,
  kSampleSeed = 2,
  kTasepInit = 3,
  kTasepClock = 4,
  kTest = 99,
};

inline std::array<std::uint32_t, 2> split_key(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

inline std::uint64_t random_bits(std::uint64_t seed, Stream stream, std::uint64_t a,
                                 std::uint32_t b) noexcept {
  const auto out = philox4x32({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), b,
                               static_cast<std::uint32_t>(stream)},
                              split_key(seed));
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// Maps 64 random bits to the open interval (0, 1). Never returns 0 or 1, so
/// -log(u) is finite and strictly positive.
inline double bits_to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Uniform attached to lattice site (i, j) under `seed`.
inline double site_uniform(std::uint64_t seed, std::uint32_t i, std::uint32_t j) noexcept {
  return bits_to_open_unit(random_bits(seed, Stream::kSiteWeight, i, j));
}

/// Inverse-CDF exponential with the given rate (mean 1/rate).
inline double exponential_from_uniform(double u, double rate) noexcept { return -std::log(u) / rate; }

/// Seed of the `index`-th independent sample of experiment `experiment_id`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint32_t experiment_id,
                                 std::uint64_t index) noexcept {
  return random_bits(master ^ (static_cast<std::uint64_t>(experiment_id) << 40), Stream::kSampleSeed, index,
                     experiment_id);
}

/// Sequential view of a counter-based stream. Satisfies
/// UniformRandomBitGenerator, but the library draws through uniform() and
/// exponential() so results do not depend on the standard library's
/// distribution implementations.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, Stream stream, std::uint32_t substream = 0) noexcept
      : seed_(seed), stream_(stream), substream_(substream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return random_bits(seed_, stream_, counter_++, substream_); }

  double uniform() noexcept { return bits_to_open_unit((*this)()); }
  double exponential(double rate) noexcept { return exponential_from_uniform(uniform(), rate); }
  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  Stream stream_;
  std::uint32_t substream_;
  std::uint64_t counter_ = 0;
};

}  // namespace lpp
