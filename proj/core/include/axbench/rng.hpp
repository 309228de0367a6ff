#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace axbench {

/// SplitMix64 finalizer. Used for seed derivation only.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stable 64-bit hash of a short tag, used to separate random streams by purpose.
std::uint64_t tag_hash(std::string_view tag) noexcept;

/// Derives an independent seed for (purpose, index) from a parent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) noexcept;

/// Philox4x32-10 block function (Salmon et al., 2011). Exposed for the
/// known-answer test.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based generator: the key is the seed, the counter is
/// (block index, stream). Streams are typically sample indices, so draws for
/// sample i do not depend on how many samples came before it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Standard normal via Box-Muller (cosine branch only).
  double normal() noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace axbench
