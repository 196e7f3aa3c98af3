#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ebprior {

using Rng = std::mt19937_64;

/// Stable 64-bit FNV-1a hash; used to derive named RNG sub-streams.
std::uint64_t fnv1a64(std::string_view text);

/// Independent generator for a named component of a seeded run. Identical
/// (seed, name) pairs always give identical streams.
Rng make_stream(std::uint64_t seed, std::string_view name);

}  // namespace ebprior
