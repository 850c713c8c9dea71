#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ecograph::detail {

// Portable draws on top of mt19937_64, whose output sequence is fixed by the
// standard (the std distributions are not).
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = uniform_below(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace ecograph::detail
