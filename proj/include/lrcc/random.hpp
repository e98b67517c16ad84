#pragma once

#include <array>
#include <cstdint>

namespace lrcc {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// Output block i of stream s under seed k is philox(counter = {i, s}, key = k),
/// so draws are a pure function of (seed, stream, position) on every platform.
/// Normal deviates use Box-Muller on top of the raw stream.
class CounterRng {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static Block philox(Block counter, std::array<std::uint32_t, 2> key) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;
  double normal() noexcept;

  /// Independent generator for a sub-task, keyed by the same seed.
  CounterRng substream(std::uint64_t stream) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Block buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes a base seed with a child index (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t child) noexcept;

}  // namespace lrcc
