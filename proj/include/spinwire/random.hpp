#pragma once

#include <cstdint>
#include <initializer_list>

namespace spinwire {

/// Independent draw streams. Each disorder source keys on its own tag so that
/// turning one amplitude on never shifts the draws of another.
enum class Stream : std::uint64_t {
  StaticCoupling = 0x5c0u,
  StaticOnsite = 0x5d1u,
  DynamicCoupling = 0xd7cu,
  OracleSampling = 0x0c1u,
};

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based hash: folds the key words into a 64-bit state one at a time.
/// The output is a pure function of the ordered key list.
constexpr std::uint64_t hash_key(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t state = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) state = detail::mix64(state ^ detail::mix64(w));
  return state;
}

/// Uniform draw in [-1, 1) keyed on (seed, realization, interval, index, stream).
constexpr double keyed_uniform(std::uint64_t seed, std::uint64_t realization, std::uint64_t interval,
                               std::uint64_t index, Stream stream) noexcept {
  const std::uint64_t bits =
      hash_key({seed, realization, interval, index, static_cast<std::uint64_t>(stream)});
  // top 53 bits -> [0, 1)
  const double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

/// Per-realization seed reported alongside ensemble rows.
constexpr std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t realization) noexcept {
  return hash_key({master_seed, realization});
}

}  // namespace spinwire
