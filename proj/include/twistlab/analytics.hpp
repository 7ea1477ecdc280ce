#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twistlab/coefficients.hpp"

namespace twistlab {

// Checkpointed sum values against a named asymptotic, for CSV traces.
struct SumTrace {
    std::vector<std::pair<double, double>> checkpoints; // (x, value), x increasing
    std::string reference;
};

// Evaluates `fn` at the checkpoints (which must be strictly increasing) and
// labels the trace with the asymptotic it is compared against.
SumTrace trace_over(const std::vector<std::uint32_t>& xs,
                    const std::function<double(std::uint32_t)>& fn, std::string reference);

// sum_{p<=x} lambda(p)^2 / p
double mertens_lambda(std::uint32_t x, const LambdaTable& lambda);

// sum_{p<=x} 1/p
double mertens_classic(std::uint32_t x);

// sum_{n<=x} lambda(n)^2
double rankin_partial(std::uint32_t x, const LambdaTable& lambda);

// sum over n <= x whose largest prime factor is <= x^{1/log log x}.
// Requires x >= 100 (the exponent needs x > e^e).
double smooth_restricted_sum(std::uint32_t x, const LambdaTable& lambda);

// sum_{x^{1/log log x} < m <= u, p|m => p > P} lambda(m)^2.
// Requires x^{1/10} <= u <= x and P < u^{1/10}.
double rough_sum(std::uint32_t x, double u, std::uint32_t P, const LambdaTable& lambda);

// sum over P-smooth n of lambda(n)^2 / n in closed Euler-factor form,
// prod_{p<=P} per_prime_second_moment(lambda(p), p^{-1/2}).  P <= 10^4.
double smooth_series(std::uint32_t P, const LambdaTable& lambda);

// Direct truncation of the same series over P-smooth n <= truncation; always
// a lower bound on smooth_series (nonnegative omitted tail).
double smooth_series_direct(std::uint32_t P, const LambdaTable& lambda, std::uint32_t truncation);

// Both sides of the Parseval identity for the finite Dirichlet polynomial
// with coefficients a_n = lambda(n) [n <= cutoff]:
//   lhs = int_1^inf |sum_{n<=min(x,cutoff)} lambda(n)|^2 x^{-1-2 sigma} dx
//         (piecewise closed form),
//   rhs = (1/2pi) int |F(sigma+it)|^2 / |sigma+it|^2 dt
//         (adaptive quadrature plus the analytic diagonal tail).
// cutoff <= 100, sigma > 0.
std::pair<double, double> parseval_check(std::uint32_t coeff_cutoff, double sigma,
                                         const LambdaTable& lambda);

} // namespace twistlab
