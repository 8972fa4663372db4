#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace unimix {

/// Engine used everywhere randomness is consumed.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent stream for (seed, label). Labels in use: "data", "init",
/// "sampler", "mix", plus indexed variants such as "mc/3".
Rng make_stream(std::uint64_t seed, std::string_view label);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(Rng& rng);

/// Worker count for internal parallel loops: UNIMIX_LT_THREADS if set and
/// positive, otherwise the hardware concurrency.
unsigned thread_budget();

}  // namespace unimix
