#include "spinit/rng.hpp"

namespace spinit {

std::uint64_t mix64(std::uint64_t x) { return SplitMix64(x)(); }

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

std::uint64_t stream_seed(std::uint64_t trial_seed, Stream stream) {
  return derive_seed(trial_seed, {static_cast<std::uint64_t>(stream)});
}

Rng make_rng(std::uint64_t trial_seed, Stream stream) {
  return Rng(stream_seed(trial_seed, stream));
}

}  // namespace spinit
