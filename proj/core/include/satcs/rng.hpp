#pragma once

// Counter-based random numbers. Every draw is a pure function of a key tuple:
// the tuple is folded through the SplitMix64 finalizer,
//   h = mix(seed); for each part p: h = mix(h ^ p)
// where mix(z) adds the golden-ratio increment 0x9E3779B97F4A7C15 and applies
// the SplitMix64 avalanche. String tags enter as their 64-bit FNV-1a hash.
// No generator state exists, so draws can be evaluated in any order or in
// parallel and remain reproducible.

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace satcs::rng {

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t tag(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

constexpr std::uint64_t key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = mix(seed);
  for (auto p : parts)
    h = mix(h ^ p);
  return h;
}

/// Uniform in [0, 1) from the top 53 bits.
constexpr double unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform in [0, bound) by multiply-shift; bound > 0.
inline std::uint64_t below(std::uint64_t bits, std::uint64_t bound) noexcept {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(bits) * bound) >> 64);
}

} // namespace satcs::rng
