#pragma once

#include <cstdint>
#include <random>

namespace asc {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds from
// (run seed, step, sample, role) without correlated streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                              std::uint64_t d = 0) {
    std::uint64_t z = a;
    for (std::uint64_t salt : {b, c, d}) {
        z += 0x9e3779b97f4a7c15ULL + salt;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
    }
    return z;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double normal(Rng& rng, double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(rng);
}

} // namespace asc
