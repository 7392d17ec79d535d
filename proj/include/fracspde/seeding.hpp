#pragma once

#include <cstdint>

namespace fracspde {

/// SplitMix64 finaliser. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Child seed for stream `index` under `parent`. Used for both noise modes
/// and Monte Carlo samples, so results never depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(parent) ^ splitmix64(index ^ 0xD6E8FEB86659FD93ULL));
}

}  // namespace fracspde
