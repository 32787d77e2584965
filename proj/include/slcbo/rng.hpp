#pragma once

#include <cstdint>
#include <random>

namespace slcbo {

using Rng = std::mt19937_64;

/// Seed of replica `index` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return base_seed ^ index;
}

/// Engine for one run. The 64-bit seed goes through seed_seq so that nearby
/// seeds (base ^ 0, base ^ 1, ...) still give unrelated streams.
inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

}  // namespace slcbo
