#pragma once

#include <cstdint>
#include <random>

namespace risnoma {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-trial seed: splitmix64(splitmix64(master) ^ index).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ index);
}

inline double uniform01(Rng& rng) {
    // 53-bit mantissa in [0,1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in (0,1], safe for log().
inline double uniform_open0(Rng& rng) { return 1.0 - uniform01(rng); }

} // namespace risnoma
