#pragma once

#include <cstdint>
#include <random>

namespace uls {

// SplitMix64 finalizer; a full-avalanche bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Substream seed for entity `index` of stream family `stream` under `master`.
// City i of a run uses derive_seed(master, i, kGenerationStream) for its
// layout and derive_seed(master, i, kPlacementStream) for ABS/UE draws, so a
// city can be regenerated in isolation and worker order never matters.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::uint64_t stream) noexcept;

inline constexpr std::uint64_t kGenerationStream = 0;
inline constexpr std::uint64_t kPlacementStream = 1;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }
  // Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);
  // Standard exponential by inversion.
  double exponential() noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace uls
