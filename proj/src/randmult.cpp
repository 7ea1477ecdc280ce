#include "twistlab/randmult.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "twistlab/parallel.hpp"
#include "twistlab/philox.hpp"
#include "twistlab/primes.hpp"

namespace twistlab {

double steinhaus_phase(std::uint64_t seed, std::uint64_t stream, std::uint64_t p) {
    return 2.0 * std::numbers::pi * philox::uniform01(seed, stream, p);
}

std::complex<double> PhaseAssignment::h_prime(std::uint32_t p) const {
    double t = theta_by_prime[p];
    return {std::cos(t), std::sin(t)};
}

PhaseAssignment sample_phases(std::uint32_t limit, std::uint64_t seed, std::uint64_t stream) {
    if (limit < 2) throw std::invalid_argument("sample_phases: limit must be >= 2");
    PhaseAssignment pa;
    pa.seed = seed;
    pa.stream = stream;
    pa.limit = limit;
    pa.primes = primes_up_to(limit);
    pa.theta_by_prime.assign(static_cast<std::size_t>(limit) + 1, 0.0);
    for (std::uint32_t p : pa.primes) pa.theta_by_prime[p] = steinhaus_phase(seed, stream, p);
    return pa;
}

std::complex<double> h_value(std::uint64_t n, const PhaseAssignment& phases) {
    if (n == 0) throw std::invalid_argument("h_value: n must be >= 1");
    double angle = 0.0;
    std::uint64_t m = n;
    for (std::uint32_t p : phases.primes) {
        if (static_cast<std::uint64_t>(p) * p > m) break;
        if (m % p == 0) {
            int a = 0;
            while (m % p == 0) { m /= p; ++a; }
            angle += a * phases.theta_by_prime[p];
        }
    }
    if (m > 1) {
        // residual factor is prime
        if (m > phases.limit)
            throw std::invalid_argument("h_value: prime factor " + std::to_string(m) + " exceeds the phase limit");
        angle += phases.theta_by_prime[static_cast<std::uint32_t>(m)];
    }
    return {std::cos(angle), std::sin(angle)};
}

namespace {

// Shared inner loop: h over n<=x by the prime-power recurrence
// h(n) = h(p^a) * h(n / p^a), one sincos per prime power only.
// `theta` maps a prime to its phase.
template <typename ThetaFn>
std::complex<double> twisted_sum_core(std::uint32_t x, const LambdaTable& lambda, const SpfTable& spf,
                                      ThetaFn&& theta, std::vector<std::complex<double>>& hbuf) {
    hbuf.resize(static_cast<std::size_t>(x) + 1);
    hbuf[1] = {1.0, 0.0};
    std::complex<double> sum{lambda.values[1], 0.0};
    for (std::uint32_t n = 2; n <= x; ++n) {
        std::uint32_t pw = spf.prime_power_part(n);
        std::complex<double> h;
        if (pw == n) {
            std::uint32_t p = spf.spf(n);
            int a = 0;
            for (std::uint32_t v = n; v > 1; v /= p) ++a;
            double ang = a * theta(p);
            h = {std::cos(ang), std::sin(ang)};
        } else {
            h = hbuf[pw] * hbuf[n / pw];
        }
        hbuf[n] = h;
        sum += lambda.values[n] * h;
    }
    return sum;
}

} // namespace

std::complex<double> twisted_random_sum(std::uint32_t x, const LambdaTable& lambda,
                                        const PhaseAssignment& phases) {
    if (x < 1) throw std::invalid_argument("twisted_random_sum: x must be >= 1");
    if (x > lambda.limit) throw std::invalid_argument("twisted_random_sum: lambda table too short");
    if (x > phases.limit) throw std::invalid_argument("twisted_random_sum: phase assignment too short");
    if (x == 1) return {lambda.values[1], 0.0};
    SpfTable spf(x);
    std::vector<std::complex<double>> hbuf;
    return twisted_sum_core(x, lambda, spf, [&](std::uint32_t p) { return phases.theta_by_prime[p]; }, hbuf);
}

MCEstimate mc_moment(std::uint32_t x, double k, std::uint64_t trials, std::uint64_t seed,
                     const LambdaTable& lambda) {
    if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("mc_moment: k must lie in [0,1]");
    if (trials < 2) throw std::invalid_argument("mc_moment: trials must be >= 2");
    if (x < 1 || x > lambda.limit) throw std::invalid_argument("mc_moment: x outside the lambda table");

    MCEstimate est;
    est.trials = trials;
    est.seed = seed;
    if (k == 0.0) { // |S|^0 = 1 with the 0^0 = 1 convention
        est.value = 1.0;
        est.std_error = 0.0;
        return est;
    }

    const SpfTable spf(x);
    std::vector<double> per_trial(trials);
    const int threads = worker_count();
#pragma omp parallel num_threads(threads) if (threads > 1)
    {
        std::vector<std::complex<double>> hbuf;
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
            auto s = twisted_sum_core(
                x, lambda, spf,
                [&](std::uint32_t p) { return steinhaus_phase(seed, static_cast<std::uint64_t>(t), p); }, hbuf);
            per_trial[static_cast<std::size_t>(t)] = std::pow(std::norm(s), k);
        }
    }

    // Sequential two-pass reduction over the trial-indexed buffer keeps the
    // aggregate bitwise independent of the worker count.
    double mean = 0.0;
    for (double v : per_trial) mean += v;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : per_trial) var += (v - mean) * (v - mean);
    var /= static_cast<double>(trials - 1);
    est.value = mean;
    est.std_error = std::sqrt(var / static_cast<double>(trials));
    return est;
}

} // namespace twistlab
