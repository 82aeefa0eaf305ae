#pragma once

#include <cstdint>
#include <random>

namespace playcov {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stream-indexed generator so every episode draws from an independent,
/// reproducible sequence of the master seed.
inline std::mt19937_64 make_stream_rng(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t s = master_seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace playcov
