#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mns {

/// SplitMix64: state += 0x9E3779B97F4A7C15, then an xor-shift-multiply mix.
/// Bit-identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal by Box–Muller (one draw per call; the partner is discarded).
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Stateless mix of a key into a seed, used to give every wavevector its own
/// SplitMix64 stream so generated fields do not depend on the grid size.
inline std::uint64_t mix_key(std::uint64_t seed, std::int64_t a, std::int64_t b, std::uint64_t salt) noexcept {
  SplitMix64 g(seed ^ (static_cast<std::uint64_t>(a) * 0xD1B54A32D192ED03ULL) ^
               (static_cast<std::uint64_t>(b) * 0xABC98388FB8FAC03ULL) ^ (salt * 0x8CB92BA72F3D8DD7ULL));
  return g.next();
}

}  // namespace mns
