#pragma once

#include <cstdint>

namespace strata {

/* splitmix64: tiny, fully specified, stable across platforms.  All seeded
 * generation in the library goes through this so reports are reproducible
 * byte for byte. */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t v = next();
        while (v >= limit)
            v = next();
        return v % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace strata
