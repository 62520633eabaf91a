#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace spinit {

using Rng = std::mt19937_64;

/// Ziggurat sampler; unlike std::normal_distribution its output sequence is
/// the same on every standard library.
using StandardNormal = boost::random::normal_distribution<double>;

/// Independent sub-streams carved out of one per-trial seed.
enum class Stream : std::uint64_t {
  signal = 1,
  matrix = 2,
  noise = 3,
  random_init = 4,
  generator = 5,
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// SplitMix64 as a uniform random bit generator. Seeding is free, so it is
/// used where every sensing row gets its own stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic seed for `base` combined with an ordered list of tags.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

std::uint64_t stream_seed(std::uint64_t trial_seed, Stream stream);

Rng make_rng(std::uint64_t trial_seed, Stream stream);

}  // namespace spinit
