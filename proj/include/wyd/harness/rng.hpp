#pragma once

#include <cstdint>

namespace wyd::harness {

// Counter-based generator: output n of stream (seed, stream) is
// splitmix64_mix(key + (n + 1) * golden) with key derived from seed and
// stream. Every trial draws from its own stream, so results do not depend on
// the order in which trials run.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi], unbiased.
  int uniform_int(int lo, int hi);
  // Standard normal via Box-Muller (cosine branch only, so each call
  // consumes exactly two draws).
  double normal();

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

}  // namespace wyd::harness
