#include "vvmean/rng.hpp"

#include <stdexcept>

namespace vvmean {

namespace {

// Stafford mix 13, the splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Stream::next_u64() {
  // One block = chain over (path length, counter, key words). The key holds
  // the full (seed, path) tuple, so distinct substreams are distinct keys by
  // construction, not by hashing.
  std::uint64_t h = 0x243F6A8885A308D3ull ^ (static_cast<std::uint64_t>(key_.size()) << 56);
  h = mix64(h ^ (counter_ + 0x9E3779B97F4A7C15ull));
  for (std::uint64_t w : key_) h = mix64(h ^ w);
  ++counter_;
  return mix64(h ^ 0xD1B54A32D192ED03ull);
}

index_t Stream::uniform_index(index_t n) {
  if (n < 1) throw std::invalid_argument("uniform_index: n must be positive");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * un;
  std::uint64_t lo = static_cast<std::uint64_t>(m);
  if (lo < un) {
    const std::uint64_t t = (0 - un) % un;
    while (lo < t) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * un;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<index_t>(m >> 64) + 1;
}

int Stream::bernoulli_sign() { return (next_u64() >> 63) ? 1 : -1; }

Stream derive(const SeedSpec& seed) {
  Stream s;
  s.key_.reserve(seed.path.size() + 1);
  s.key_.push_back(seed.master_seed);
  for (std::uint32_t label : seed.path) s.key_.push_back(static_cast<std::uint64_t>(label));
  return s;
}

}  // namespace vvmean
