#pragma once

#include <cstdint>
#include <random>

namespace bundle_lab {

/// SplitMix64 finalizer. Used to derive independent substream seeds from a
/// master seed and a stream index.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream. The mapping from engine output to doubles is
/// fixed here (not left to the standard library) so that results are
/// bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Substream `index` of the master seed. Batches of a Monte Carlo run each
  /// draw from their own substream, so results do not depend on scheduling.
  static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(master_seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bundle_lab
