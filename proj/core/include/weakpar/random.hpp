#pragma once

#include <cstdint>
#include <random>

namespace weakpar {

/// Seeded random stream. mt19937_64 output is fixed by the standard, and the
/// helpers below avoid the implementation-defined std distributions, so a
/// seed reproduces the same run on every toolchain.
using Rng = std::mt19937_64;

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

/// Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t v = rng();
        if (v >= limit) {
            return v % bound;
        }
    }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform word of `bits` low bits (bits <= 64).
inline std::uint64_t uniform_word(Rng& rng, unsigned bits) {
    if (bits == 0) {
        return 0;
    }
    const std::uint64_t v = rng();
    return bits >= 64 ? v : (v & ((std::uint64_t{1} << bits) - 1));
}

/// Derives an independent stream seed for run `index` of a base seed (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace weakpar
