#pragma once

#include <cstdint>

namespace tna {

/// SplitMix64 (Steele, Lea & Flood 2014; Vigna's public-domain reference
/// implementation). Chosen because the algorithm is fully specified in a few
/// lines of 64-bit arithmetic, so seeded output streams are reproducible
/// bit-for-bit across platforms and language ports. Reference outputs for
/// seed 0 are 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F;
/// the unit tests pin these.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1) using the top 53 bits.
    double next_unit() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) via 128-bit multiply-high reduction
    /// (Lemire). Deterministic everywhere; the modulo bias of at most
    /// bound/2^64 is irrelevant at the bounds used here.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    /// Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
    std::int64_t next_in_range(std::int64_t lo, std::int64_t hi) noexcept {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::uint64_t state_;
};

}  // namespace tna
