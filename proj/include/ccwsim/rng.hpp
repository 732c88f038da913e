#pragma once

#include <cstdint>
#include <random>

namespace ccwsim {

// Derives the per-realization seed from the master seed and the realization
// index.  splitmix64 step: add the golden-ratio gamma, then run the finalizer
// so that consecutive indices land on statistically unrelated seeds.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + index * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Unbiased draw in [0, n) by rejection.  Implemented here rather than with
// std::uniform_int_distribution because the standard does not pin that
// distribution's output sequence, and realizations must be bit-reproducible.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold)
            return r % n;
    }
}

}  // namespace ccwsim
