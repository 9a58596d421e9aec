#pragma once

#include <array>
#include <cstdint>

namespace selfnorm {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to derive child seeds.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based stream addressed by (seed, replication, step).
///
/// Draws are a pure function of the address, so any replication can be
/// regenerated on any thread in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replication) : seed_(seed), replication_(replication) {}

  /// Two independent 64-bit words for `step`.
  std::array<std::uint64_t, 2> words(std::uint64_t step) const;
  /// Uniform double in [0,1) with 53 random bits; lane selects one of two draws per step.
  double uniform(std::uint64_t step, unsigned lane = 0) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t replication() const { return replication_; }

 private:
  std::uint64_t seed_;
  std::uint64_t replication_;
};

/// Child seed for case `index` under `master_seed`.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace selfnorm
