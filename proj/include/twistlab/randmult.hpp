#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "twistlab/coefficients.hpp"

namespace twistlab {

// Steinhaus values h(p) = e^{i theta_p} on primes p <= limit.  Phases come
// from the counter-based generator keyed by (seed, stream, p), so the same
// key always regenerates the same vector bit for bit; `stream` is the trial
// index for Monte Carlo draws (0 for standalone assignments).
struct PhaseAssignment {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint32_t limit = 0;
    std::vector<std::uint32_t> primes;
    std::vector<double> theta_by_prime; // size limit+1, valid at prime slots

    double theta(std::uint32_t p) const { return theta_by_prime[p]; }
    std::complex<double> h_prime(std::uint32_t p) const;
};

PhaseAssignment sample_phases(std::uint32_t limit, std::uint64_t seed, std::uint64_t stream = 0);

// The phase in [0, 2 pi) that sample_phases assigns to prime p.
double steinhaus_phase(std::uint64_t seed, std::uint64_t stream, std::uint64_t p);

// Completely multiplicative extension h(n) = prod h(p)^a over p^a || n.
// Every prime factor of n must be covered by the assignment.
std::complex<double> h_value(std::uint64_t n, const PhaseAssignment& phases);

// sum_{n<=x} h(n) lambda(n); each h(n) costs O(omega(n)) via a
// smallest-prime-factor table.
std::complex<double> twisted_random_sum(std::uint32_t x, const LambdaTable& lambda,
                                        const PhaseAssignment& phases);

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

// Sample mean and standard error of |sum_{n<=x} h(n) lambda(n)|^{2k} over
// independent phase draws; trial i draws from stream i, so the estimate is
// identical for every worker count.
MCEstimate mc_moment(std::uint32_t x, double k, std::uint64_t trials, std::uint64_t seed,
                     const LambdaTable& lambda);

} // namespace twistlab
