#pragma once

#include <array>
#include <cstdint>

namespace ariswpc::rng {

// Philox-4x64-10 counter-based generator. A (counter, key) pair maps to
// four statistically independent 64-bit words through 10 rounds of a
// multiply-xor network; there is no hidden state, so any block of any
// stream can be produced directly. Constants and round structure follow
// the original Philox definition (verified against an independent
// implementation at known-answer level).
struct Counter {
    std::uint64_t w0 = 0;
    std::uint64_t w1 = 0;
    std::uint64_t w2 = 0;
    std::uint64_t w3 = 0;
};

struct Key {
    std::uint64_t k0 = 0;
    std::uint64_t k1 = 0;
};

namespace detail {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

inline std::array<std::uint64_t, 4> philox4x64_10(Counter c, Key k) {
    using namespace detail;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mul_hi_lo(kMult0, c.w0, hi0, lo0);
        mul_hi_lo(kMult1, c.w2, hi1, lo1);
        c = Counter{hi1 ^ c.w1 ^ k.k0, lo1, hi0 ^ c.w3 ^ k.k1, lo0};
        k.k0 += kWeyl0;
        k.k1 += kWeyl1;
    }
    return {c.w0, c.w1, c.w2, c.w3};
}

// Map a 64-bit word to a double. High 53 bits are used in both cases.
// uniform_open_closed is in (0,1] (safe as a log argument);
// uniform_closed_open is in [0,1).
inline double uniform_open_closed(std::uint64_t w) {
    return static_cast<double>((w >> 11) + 1) * 0x1.0p-53;
}

inline double uniform_closed_open(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

}  // namespace ariswpc::rng
