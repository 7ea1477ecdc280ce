#include "twistlab/primes.hpp"

#include <stdexcept>

namespace twistlab {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // This base set is a proven deterministic witness set for n < 2^64.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
        }
    }
    return primes;
}

SpfTable::SpfTable(std::uint32_t limit) : limit_(limit) {
    if (limit < 1) throw std::invalid_argument("SpfTable: limit must be >= 1");
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    pw_.assign(static_cast<std::size_t>(limit) + 1, 0);
    spf_[1] = 1;
    pw_[1] = 1;
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = i;
            pw_[i] = i;
            primes_.push_back(i);
        }
        for (std::uint32_t p : primes_) {
            if (p > spf_[i]) break;
            std::uint64_t v = static_cast<std::uint64_t>(p) * i;
            if (v > limit) break;
            spf_[v] = p;
            pw_[v] = (p == spf_[i]) ? pw_[i] * p : p;
        }
    }
}

std::vector<std::uint32_t> largest_prime_factor_table(std::uint32_t limit) {
    std::vector<std::uint32_t> lpf(static_cast<std::size_t>(limit) + 1, 0);
    if (limit >= 1) lpf[1] = 1;
    for (std::uint32_t p = 2; p <= limit; ++p) {
        if (lpf[p] == 0) {
            // p prime: stamp it on every multiple; later (larger) primes overwrite.
            for (std::uint64_t m = p; m <= limit; m += p) lpf[m] = p;
        }
    }
    return lpf;
}

std::vector<std::uint32_t> divisor_count_table(std::uint32_t limit) {
    std::vector<std::uint32_t> d(static_cast<std::size_t>(limit) + 1, 0);
    for (std::uint32_t i = 1; i <= limit; ++i)
        for (std::uint64_t m = i; m <= limit; m += i) ++d[m];
    return d;
}

} // namespace twistlab
