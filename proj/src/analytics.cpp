#include "twistlab/analytics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "twistlab/eulerprod.hpp"
#include "twistlab/primes.hpp"
#include "twistlab/quadrature.hpp"

namespace twistlab {

SumTrace trace_over(const std::vector<std::uint32_t>& xs,
                    const std::function<double(std::uint32_t)>& fn, std::string reference) {
    SumTrace tr;
    tr.reference = std::move(reference);
    std::uint32_t prev = 0;
    for (std::uint32_t x : xs) {
        if (x <= prev) throw std::invalid_argument("trace_over: checkpoints must be strictly increasing");
        prev = x;
        tr.checkpoints.emplace_back(static_cast<double>(x), fn(x));
    }
    return tr;
}

double mertens_lambda(std::uint32_t x, const LambdaTable& lambda) {
    if (x > lambda.limit) throw std::invalid_argument("mertens_lambda: lambda table shorter than x");
    double acc = 0.0;
    for (std::uint32_t p : primes_up_to(x)) acc += lambda.values[p] * lambda.values[p] / p;
    return acc;
}

double mertens_classic(std::uint32_t x) {
    if (x < 2) throw std::invalid_argument("mertens_classic: x must be >= 2");
    double acc = 0.0;
    for (std::uint32_t p : primes_up_to(x)) acc += 1.0 / p;
    return acc;
}

double rankin_partial(std::uint32_t x, const LambdaTable& lambda) {
    if (x < 1 || x > lambda.limit) throw std::invalid_argument("rankin_partial: x outside the lambda table");
    double acc = 0.0;
    for (std::uint32_t n = 1; n <= x; ++n) acc += lambda.values[n] * lambda.values[n];
    return acc;
}

double smooth_restricted_sum(std::uint32_t x, const LambdaTable& lambda) {
    if (x < 100) throw std::invalid_argument("smooth_restricted_sum: x must be >= 100");
    if (x > lambda.limit) throw std::invalid_argument("smooth_restricted_sum: lambda table shorter than x");
    const double cutoff = std::pow(static_cast<double>(x), 1.0 / std::log(std::log(static_cast<double>(x))));
    const auto lpf = largest_prime_factor_table(x);
    double acc = 0.0;
    for (std::uint32_t n = 1; n <= x; ++n)
        if (static_cast<double>(lpf[n]) <= cutoff) acc += lambda.values[n] * lambda.values[n];
    return acc;
}

double rough_sum(std::uint32_t x, double u, std::uint32_t P, const LambdaTable& lambda) {
    const double xd = static_cast<double>(x);
    if (!(std::pow(xd, 0.1) <= u && u <= xd)) throw std::invalid_argument("rough_sum: need x^{1/10} <= u <= x");
    if (!(static_cast<double>(P) < std::pow(u, 0.1))) throw std::invalid_argument("rough_sum: need P < u^{1/10}");
    if (x < 100) throw std::invalid_argument("rough_sum: x must be >= 100 (smoothness exponent)");
    const auto ub = static_cast<std::uint32_t>(std::floor(u));
    if (ub > lambda.limit) throw std::invalid_argument("rough_sum: lambda table shorter than u");
    const double lower = std::pow(xd, 1.0 / std::log(std::log(xd)));
    SpfTable spf(ub);
    double acc = 0.0;
    for (std::uint32_t m = 2; m <= ub; ++m) {
        if (static_cast<double>(m) <= lower) continue;
        if (spf.spf(m) > P) acc += lambda.values[m] * lambda.values[m];
    }
    return acc;
}

double smooth_series(std::uint32_t P, const LambdaTable& lambda) {
    if (P > 10'000) throw std::invalid_argument("smooth_series: P capped at 10^4");
    if (P > lambda.limit) throw std::invalid_argument("smooth_series: lambda table shorter than P");
    double acc = 1.0;
    for (std::uint32_t p : primes_up_to(P))
        acc *= per_prime_second_moment(lambda.values[p], 1.0 / std::sqrt(static_cast<double>(p)));
    return acc;
}

double smooth_series_direct(std::uint32_t P, const LambdaTable& lambda, std::uint32_t truncation) {
    if (truncation < 1 || truncation > lambda.limit)
        throw std::invalid_argument("smooth_series_direct: truncation outside the lambda table");
    SpfTable spf(truncation);
    // a number is P-smooth iff its largest prime factor is <= P; walk the
    // factorization through spf.
    double acc = 0.0;
    std::vector<bool> smooth(static_cast<std::size_t>(truncation) + 1, false);
    smooth[1] = true;
    acc += lambda.values[1] * lambda.values[1];
    for (std::uint32_t n = 2; n <= truncation; ++n) {
        std::uint32_t pw = spf.prime_power_part(n);
        smooth[n] = (spf.spf(n) <= P) && smooth[n / pw];
        if (smooth[n]) acc += lambda.values[n] * lambda.values[n] / n;
    }
    return acc;
}

std::pair<double, double> parseval_check(std::uint32_t coeff_cutoff, double sigma,
                                         const LambdaTable& lambda) {
    if (sigma <= 0.0) throw std::invalid_argument("parseval_check: sigma must be > 0");
    if (coeff_cutoff < 1 || coeff_cutoff > 100)
        throw std::invalid_argument("parseval_check: cutoff must be in [1, 100]");
    if (coeff_cutoff > lambda.limit) throw std::invalid_argument("parseval_check: lambda table too short");

    const std::uint32_t c = coeff_cutoff;

    // Left side in closed form: the partial-sum function is constant on
    // [n, n+1), so each piece integrates to A_n^2 (n^{-2s} - (n+1)^{-2s})/(2s),
    // plus the constant tail from x = cutoff on.
    double lhs = 0.0;
    double prefix = 0.0;
    for (std::uint32_t n = 1; n < c; ++n) {
        prefix += lambda.values[n];
        lhs += prefix * prefix *
               (std::pow(n, -2.0 * sigma) - std::pow(n + 1.0, -2.0 * sigma)) / (2.0 * sigma);
    }
    prefix += lambda.values[c];
    lhs += prefix * prefix * std::pow(static_cast<double>(c), -2.0 * sigma) / (2.0 * sigma);

    // Right side.  w_n = lambda(n) n^{-sigma}; the integrand is even in t.
    std::vector<double> w(c + 1), ln(c + 1);
    for (std::uint32_t n = 1; n <= c; ++n) {
        w[n] = lambda.values[n] * std::pow(static_cast<double>(n), -sigma);
        ln[n] = std::log(static_cast<double>(n));
    }
    auto integrand = [&](double t) {
        std::complex<double> F{0.0, 0.0};
        for (std::uint32_t n = 1; n <= c; ++n) F += w[n] * std::complex<double>{std::cos(ln[n] * t), -std::sin(ln[n] * t)};
        return std::norm(F) / (sigma * sigma + t * t);
    };

    // Beyond T the diagonal part integrates in closed form
    // (atan(T/s) + atan(s/T) = pi/2); the oscillatory cross terms decay like
    // T^{-2} and sit far below the 1e-3 budget at T = 2048.
    const double T = 2048.0;
    double diag = 0.0;
    for (std::uint32_t n = 1; n <= c; ++n) diag += w[n] * w[n];
    const double tail = diag * (2.0 / sigma) * std::atan(sigma / T);

    // Unit panels while the integrand carries weight, then doubling panels
    // out to T; forced subdivision keeps the cross-term oscillation honest.
    const double scale = std::max(1.0, diag / sigma);
    double body = 0.0;
    double lo = 0.0;
    while (lo < T) {
        double width = lo < 64.0 ? 1.0 : lo;
        double hi = std::min(lo + width, T);
        body += integrate_adaptive(integrand, lo, hi, 1e-15 * scale, 40, 3);
        lo = hi;
    }
    const double rhs = (2.0 * body + tail) / (2.0 * std::numbers::pi);
    return {lhs, rhs};
}

} // namespace twistlab
