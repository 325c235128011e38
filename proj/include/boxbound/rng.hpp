#pragma once

#include <cstdint>
#include <random>

namespace boxbound {

// SplitMix64 finalizer (Steele, Lea, Flood 2014); used only to derive seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream for one work chunk: mt19937_64 seeded with splitmix64(seed ^ splitmix64(chunk)).
// Both algorithms are fully specified, so streams match across platforms.
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(chunk)));
}

// Top 53 bits as a double in [0, 1). std::uniform_real_distribution is
// implementation-defined, so it is avoided here.
inline double uniform01(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace boxbound
