#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace twistlab::ntt {

// Word-size NTT primes.  Each is p = c * 2^24 + 1 just below 2^62 with a
// verified primitive root, so every power-of-two transform length up to 2^24
// exists.  Their product is 310 bits, which is the CRT capacity quoted in the
// reconstruction bound in coefficients.cpp.
struct Prime {
    std::uint64_t value;
    std::uint32_t generator;
};

inline constexpr std::array<Prime, 5> kPrimes = {{
    {4611686018326724609ull, 3},  // 274877906938 * 2^24 + 1
    {4611686018309947393ull, 5},  // 274877906937 * 2^24 + 1
    {4611686018058289153ull, 5},  // 274877906922 * 2^24 + 1
    {4611686017974403073ull, 3},  // 274877906917 * 2^24 + 1
    {4611686017773076481ull, 3},  // 274877906905 * 2^24 + 1
}};

inline constexpr int kMaxLog2Length = 24;

// Montgomery arithmetic mod an odd prime < 2^63.
class Montgomery {
public:
    explicit Montgomery(std::uint64_t p);

    std::uint64_t modulus() const { return p_; }
    std::uint64_t to_mont(std::uint64_t x) const { return mul(x, r2_); }
    // REDC product; with one factor in the Montgomery domain the result stays
    // in the other factor's domain.
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
        std::uint64_t m = static_cast<std::uint64_t>(t) * ninv_;
        std::uint64_t r = static_cast<std::uint64_t>((t + static_cast<unsigned __int128>(m) * p_) >> 64);
        return r >= p_ ? r - p_ : r;
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r = a + b;
        return r >= p_ ? r - p_ : r;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
    // base given and returned in the plain residue domain
    std::uint64_t pow(std::uint64_t base, std::uint64_t e) const;

private:
    std::uint64_t p_;
    std::uint64_t ninv_; // -p^{-1} mod 2^64
    std::uint64_t r2_;   // 2^128 mod p
};

// In-place radix-2 transform of power-of-two length over one prime field.
// Data lives in the plain residue domain; twiddle tables are precomputed in
// the Montgomery domain so each butterfly is a single REDC multiply.
// The parallel and serial paths execute the same butterflies and are
// bit-identical (exact arithmetic).
class Transformer {
public:
    Transformer(Prime prime, std::size_t length);

    std::size_t length() const { return n_; }
    const Montgomery& field() const { return mg_; }

    void forward(std::uint64_t* a, bool parallel) const;
    void inverse(std::uint64_t* a, bool parallel) const;

private:
    void run(std::uint64_t* a, const std::vector<std::uint64_t>& twiddle, bool parallel) const;

    Montgomery mg_;
    std::size_t n_;
    std::vector<std::uint64_t> fw_;       // w^j, Montgomery domain, j < n/2
    std::vector<std::uint64_t> bw_;       // w^{-j}
    std::vector<std::uint32_t> bitrev_;
    std::uint64_t n_inv_mont_;
};

} // namespace twistlab::ntt
