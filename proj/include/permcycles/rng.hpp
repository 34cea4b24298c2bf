#pragma once

#include <cstdint>
#include <random>

namespace permcycles {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to decorrelate (seed, stream) pairs.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Generator for substream `stream` of `seed`. Distinct streams of one seed
/// are independent for all practical purposes, and a given (seed, stream)
/// always yields the same sequence.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

double uniform01(Rng& rng);

/// Uniform integer in [0, bound).
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

}  // namespace permcycles
