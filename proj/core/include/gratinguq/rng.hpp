#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gratinguq {

using RandomStream = std::mt19937_64;

// Stream tags. Each random consumer draws from its own stream, keyed by
// (master seed, sample index, purpose, ...), so results never depend on the
// order in which samples are processed.
enum class StreamPurpose : std::uint64_t
{
    surface = 1,
    noise = 2,
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Derive a child seed from a parent seed and a list of tags.
std::uint64_t derive_seed(std::uint64_t parent,
                          std::initializer_list<std::uint64_t> tags);

/// Seed of Monte Carlo sample m under a master seed.
std::uint64_t sample_seed(std::uint64_t master, std::uint64_t m);

RandomStream make_stream(std::uint64_t seed);

}  // namespace gratinguq
