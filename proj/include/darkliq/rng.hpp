#pragma once

#include <cstdint>
#include <random>

namespace darkliq {

/// Independent engines for one path, keyed only by (seed, path index).
struct PathRng {
    std::mt19937_64 fills;  ///< dark-pool fill arrivals (pi_1)
    std::mt19937_64 buy;    ///< buy-side arrivals (pi_2), market layer only
    std::mt19937_64 price;  ///< fundamental price increments

    PathRng(std::uint64_t seed, std::uint64_t index)
        : fills(stream(seed, index, 0)), buy(stream(seed, index, 1)), price(stream(seed, index, 2)) {}

    static std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index, std::uint32_t sub) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), sub};
        return std::mt19937_64(seq);
    }
};

}  // namespace darkliq
