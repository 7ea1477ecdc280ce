#pragma once

#include <array>
#include <cstdint>

namespace twistlab {

// Philox4x32-10 (Salmon et al., SC'11).  Stateless: a (key, counter) pair maps
// to 128 output bits, so draws keyed per (seed, stream, index) are independent
// of evaluation order and worker count.
namespace philox {

inline constexpr std::uint32_t kW32A = 0x9E3779B9u;
inline constexpr std::uint32_t kW32B = 0xBB67AE85u;
inline constexpr std::uint32_t kM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

inline std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(kM4x32A) * c0;
        std::uint64_t p1 = static_cast<std::uint64_t>(kM4x32B) * c2;
        std::uint32_t lo0 = static_cast<std::uint32_t>(p0), hi0 = static_cast<std::uint32_t>(p0 >> 32);
        std::uint32_t lo1 = static_cast<std::uint32_t>(p1), hi1 = static_cast<std::uint32_t>(p1 >> 32);
        std::uint32_t n0 = hi1 ^ c1 ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c3 ^ k1;
        std::uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += kW32A;
        k1 += kW32B;
    }
    return {c0, c1, c2, c3};
}

// Uniform double in [0,1) from the top 53 of the first 64 output bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    auto out = block(seed, stream, index);
    std::uint64_t bits = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace philox
} // namespace twistlab
