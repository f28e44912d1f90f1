#pragma once

#include <cstdint>
#include <random>

namespace fgot {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and up to three stream tags.
/// Children are stable under reordering of work items, so per-pair seeds do
/// not depend on how many workers pick them up.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (a * 0xd1342543de82ef95ULL + 1));
    s = splitmix64(s ^ (b * 0xaf251af3b0f025b5ULL + 2));
    s = splitmix64(s ^ (c * 0x9e3779b97f4a7c15ULL + 3));
    return s;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace fgot
