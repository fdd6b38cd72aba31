#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sbdae {

using Rng = std::mt19937_64;

/// Mixes a 64-bit value (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-stage seed derived from the run seed. The same (seed, stage) pair always
/// yields the same value, so any stage can be re-run in isolation.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : stage) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(seed ^ mix64(h));
}

// std distributions are implementation-defined; these two are not.

/// Uniform double in [0, 1).
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform index in [0, n).
inline std::size_t uniform_index(Rng &rng, std::size_t n) {
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

/// Fisher-Yates shuffle driven by uniform_index.
template <class RandomIt>
void shuffle(RandomIt first, RandomIt last, Rng &rng) {
    auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = uniform_index(rng, i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace sbdae
