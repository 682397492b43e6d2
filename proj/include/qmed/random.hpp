#pragma once

// Deterministic splittable random streams for the Monte Carlo harness.
//
// A stream is identified by (master_seed, stream_index). State is seeded by
// the splitmix64 sequence started at master_seed + stream_index * GOLDEN
// (the standard splitmix stream construction), and outputs come from
// xoshiro256++. Everything is 64-bit integer arithmetic, so sequences are
// bit-identical across platforms and compilers; doubles are built from the
// top 53 bits only. Substreams taken per replication make results
// independent of how replications are scheduled across workers.

#include <cstdint>

#include "qmed/common.hpp"

namespace qmed {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_next(std::uint64_t& s) {
    s += kGolden;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

class RandomStream {
public:
    explicit RandomStream(std::uint64_t master_seed, std::uint64_t stream_index = 0)
        : master_(master_seed), index_(stream_index) {
        std::uint64_t chain = master_seed + stream_index * detail::kGolden;
        for (std::uint64_t& word : s_) word = detail::splitmix64_next(chain);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is absorbing
    }

    // Fresh stream keyed by (master_seed, index), independent of this
    // stream's position.
    RandomStream substream(std::uint64_t index) const { return RandomStream(master_, index); }

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_index() const { return index_; }

    // xoshiro256++
    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl64(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1): lattice midpoints, never exactly 0 or 1. Used where
    // a quantile function would map 0 to a boundary.
    double uniform_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t s_[4];
    std::uint64_t master_;
    std::uint64_t index_;
};

}  // namespace qmed
