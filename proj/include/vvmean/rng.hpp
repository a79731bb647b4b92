#pragma once

#include <cstdint>
#include <vector>

#include "vvmean/discrete_function.hpp"

namespace vvmean {

/// Address of a random substream: a master seed plus an ordered path of
/// 32-bit labels (trial index, algorithm stage, ...). Distinct (seed, path)
/// pairs are distinct keys by construction — the full tuple is the key, no
/// lossy hashing happens on derivation.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::vector<std::uint32_t> path;

  SeedSpec child(std::uint32_t label) const {
    SeedSpec s = *this;
    s.path.push_back(label);
    return s;
  }
};

/// Keyed counter generator positioned inside one substream. Each output
/// block is a mix chain over (path length, counter, seed, labels...), so
/// sibling streams never share state and advancing one cannot affect
/// another. Single-owner: move between threads, never share.
class Stream {
 public:
  std::uint64_t next_u64();

  /// Unbiased uniform draw from {1..n} (Lemire multiply-shift with
  /// rejection; the rejection loop consumes from this stream only).
  index_t uniform_index(index_t n);

  /// Fair sign in {-1, +1}.
  int bernoulli_sign();

 private:
  friend Stream derive(const SeedSpec& seed);
  std::vector<std::uint64_t> key_;
  std::uint64_t counter_ = 0;
};

/// Deterministic function of (master_seed, path): the same seed spec yields
/// the identical output sequence on every platform.
Stream derive(const SeedSpec& seed);

}  // namespace vvmean
