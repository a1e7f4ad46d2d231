#pragma once

// Counter-based normal variates: draw i of a stream is a pure function of
// (seed, stream label, i), so any partition of the index range across
// workers reproduces the same sequence.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pathloss {

/// Fixed labels for independent substreams derived from one master seed.
enum class Stream : std::uint64_t {
  position_x = 0x7a3c'1f52'9e04'b6d1ULL,
  position_y = 0x41e9'd07b'2c86'f3a5ULL,
  shadowing = 0xc5b2'6a18'e7f0'4d93ULL,
};

namespace detail {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e37'79b9'7f4a'7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58'476d'1ce4'e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d0'49bb'1331'11ebULL;
  return z ^ (z >> 31);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
constexpr double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, Stream stream) noexcept
      : key_(detail::mix64(seed ^ detail::mix64(static_cast<std::uint64_t>(stream)))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return detail::mix64(key_ ^ detail::mix64(counter));
  }

  constexpr double uniform(std::uint64_t counter) const noexcept {
    return detail::to_open_unit(bits(counter));
  }

  /// Standard normal draw number `index` (Box-Muller on two counter slots).
  double normal(std::uint64_t index) const noexcept {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace pathloss
