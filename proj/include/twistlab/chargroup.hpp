#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "twistlab/coefficients.hpp"

namespace twistlab {

inline constexpr std::uint32_t kModulusCap = 10'000'019;

// Multiplicative group mod a prime q, realized through a primitive root g and
// the full index (discrete log) table: index[g^k mod q] = k for k = 0..q-2.
// Characters are then chi_t(n) = e(2 pi i t index[n] / (q-1)).
struct CharacterGroup {
    std::uint32_t q = 0;
    std::uint32_t g = 0;
    std::vector<std::uint32_t> index; // length q, slot 0 unused
};

// Smallest g >= 2 of multiplicative order q-1, verified against the prime
// factorization of q-1.
std::uint32_t find_primitive_root(std::uint32_t q);

CharacterGroup build_group(std::uint32_t q);

// S_t = sum_{n<=x} chi_t(n) lambda(n) for every character t = 0..q-2.
struct CharSumVector {
    std::uint32_t q = 0;
    std::uint32_t x = 0;
    std::vector<std::complex<double>> sums;
};

// All q-1 sums at once: scatter lambda(n) into index buckets, then one
// arbitrary-length DFT (chirp-z embedding).  O(q log q).
CharSumVector all_char_sums(const CharacterGroup& group, std::uint32_t x, const LambdaTable& lambda);

// Literal-definition evaluation, O(q x).  Oracle for tests and
// `--method direct`; requires q <= 10^4.
CharSumVector brute_char_sums(const CharacterGroup& group, std::uint32_t x, const LambdaTable& lambda);

// (1/(q-1)) sum_t |S_t|^{2k}, principal character included, 0 <= k <= 1,
// with the convention 0^0 = 1.
double moment(const CharSumVector& sums, double k);

// (x / (1 + (1-k) sqrt(log log(10 L))))^k with L = min(x, q/x), natural logs.
double theorem_bound(std::uint32_t x, std::uint32_t q, double k);

struct MomentReport {
    std::uint32_t q = 0;
    std::uint32_t x = 0;
    struct Entry {
        double k = 0;
        double moment = 0;
        double bound = 0;
        double ratio = 0;
    };
    std::vector<Entry> entries;
};

MomentReport moment_report(const CharSumVector& sums, const std::vector<double>& k_values);

} // namespace twistlab
