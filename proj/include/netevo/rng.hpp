#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace netevo {

using Rng = std::mt19937_64;

// Mixes a 64-bit value (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over bytes, used for stream names and content hashes.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Derives the seed of a named sub-stream from a root seed. The same
/// (root, name, index) always yields the same seed, independent of the order
/// in which streams are requested, so parallel consumers stay reproducible.
std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t index = 0);

inline Rng make_stream(std::uint64_t root, std::string_view name, std::uint64_t index = 0)
{
    return Rng(derive_seed(root, name, index));
}

inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool bernoulli(Rng& rng, double p)
{
    return std::bernoulli_distribution(p)(rng);
}

} // namespace netevo
