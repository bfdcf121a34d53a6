#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace evoprune {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for a named sub-stream of a master seed (e.g. "data", "phase1").
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) noexcept;

/// Seed for stream (a, b) under a master seed, e.g. (generation, individual).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform real in [0, 1) using the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [lo, hi] inclusive.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>{lo, hi}(rng);
}

}  // namespace evoprune
