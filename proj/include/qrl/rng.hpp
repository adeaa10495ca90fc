#pragma once

#include <cstdint>
#include <random>

namespace qrl {

using Rng = std::mt19937_64;

// Per-agent stream derivation.
//
// The scheme: eight 32-bit words are produced by a SplitMix64 chain started
// at `master_seed ^ splitmix64(stream + 1)`, fed through std::seed_seq and
// used to seed a 64-bit Mersenne Twister. Streams for distinct (seed, stream)
// pairs are independent for all practical purposes; the generator period is
// 2^19937 - 1.
Rng derive_rng(std::uint64_t master_seed, std::uint64_t stream);

std::uint64_t splitmix64(std::uint64_t x);

// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace qrl
