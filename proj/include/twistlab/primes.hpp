#pragma once

#include <cstdint>
#include <vector>

namespace twistlab {

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime_u64(std::uint64_t n);

// Ascending list of primes <= limit.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// Linear smallest-prime-factor sieve.  Besides spf(n) it records the full
// power of spf(n) dividing n, so a factorization step costs O(1) and a full
// factorization O(omega(n)).
class SpfTable {
public:
    explicit SpfTable(std::uint32_t limit);

    std::uint32_t limit() const { return limit_; }
    std::uint32_t spf(std::uint32_t n) const { return spf_[n]; }
    // p^a with p = spf(n), p^a || n
    std::uint32_t prime_power_part(std::uint32_t n) const { return pw_[n]; }
    bool is_prime(std::uint32_t n) const { return n >= 2 && spf_[n] == n; }
    const std::vector<std::uint32_t>& primes() const { return primes_; }

private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> pw_;
    std::vector<std::uint32_t> primes_;
};

// lpf[n] = largest prime factor of n (lpf[1] = 1).
std::vector<std::uint32_t> largest_prime_factor_table(std::uint32_t limit);

// d[n] = number of divisors of n.
std::vector<std::uint32_t> divisor_count_table(std::uint32_t limit);

} // namespace twistlab
