#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "twistlab/coefficients.hpp"
#include "twistlab/randmult.hpp"

namespace twistlab {

// Unit-circle roots of z^2 - lambda(p) z + 1 = 0; alpha carries the
// nonnegative imaginary part.
struct SatakePair {
    std::complex<double> alpha;
    std::complex<double> beta;
};

SatakePair satake(double lambda_p);

// Immutable per-prime data for random Euler products over p <= P:
// lambda(p), lambda(p^2), the Satake pair and one Steinhaus phase draw.
struct EulerEvaluator {
    std::uint32_t P = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<std::uint32_t> primes;
    std::vector<double> lambda_p;
    std::vector<double> lambda_p2;
    std::vector<double> theta;
    std::vector<std::complex<double>> alpha; // beta = conj(alpha)
    std::vector<double> log_p;
};

EulerEvaluator make_euler_evaluator(std::uint32_t P, const LambdaTable& lambda,
                                    const PhaseAssignment& phases);

// F(s) = prod_{p<=P} (1 - alpha_p h(p) p^{-s})^{-1} (1 - beta_p h(p) p^{-s})^{-1},
// evaluated as exp of summed logs.  Re(s) >= 0.4.
std::complex<double> euler_value(std::complex<double> s, const EulerEvaluator& ev);

// The factor of euler_value restricted to primes in
// (x^{e^-(l+2)}, x^{e^-(l+1)}]; the band must lie inside the prime table.
std::complex<double> band_product(int l, double x, std::complex<double> s, const EulerEvaluator& ev);

// sum_{j>=0} lambda(p^j)^2 r^{2j}, truncated when the Deligne-bounded tail
// drops below 1e-14.  Equals the h-phase average of
// |(1 - alpha e^{i t} r)(1 - beta e^{i t} r)|^{-2}.
double per_prime_second_moment(double lambda_p, double r);

// Exponent/offset bundle for the expectation identity below (a, b named to
// keep clear of the Satake pair).
struct MomentExponents {
    double a = 0;
    double b = 0;
    double sigma1 = 0;
    double sigma2 = 0;
    double t1 = 0;
    double t2 = 0;
};

struct IdentityCheck {
    MCEstimate mc;
    double closed_form = 0.0;
};

// Monte Carlo average of
//   prod_{z<=p<=y} |1-alpha_p h(p) p^{-(1/2+s1+i t1)}|^{-2a} |1-beta_p ...|^{-2a}
//                * |...p^{-(1/2+s2+i t2)}|^{-2b} |...|^{-2b}
// against its closed-form main term
//   exp(sum_{z<=p<=y} a^2 L/p^{1+2s1} + b^2 L/p^{1+2s2}
//                   + 2ab L cos((t2-t1) log p)/p^{1+s1+s2}),  L = lambda(p)^2.
// Requires 100(1+max(a^2,b^2)) <= z < y <= 10^5.
IdentityCheck mc_expectation_identity(double z, double y, const MomentExponents& me,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const LambdaTable& lambda);

// E|F(1/2+it)|^2 by Monte Carlo against the exact Euler-factor product
// prod_{p<=P} per_prime_second_moment(lambda(p), p^{-1/2}); the exact side
// does not involve t.  P <= 10^4.
IdentityCheck second_moment_identity(std::uint32_t P, double t, std::uint64_t trials,
                                     std::uint64_t seed, const LambdaTable& lambda);

// (1/log^{1.01}P) sum_{|j| <= (log^{1.01}P)/2} |F(1/2 + i j / log^{1.01}P)|^2.
double discrete_grid_avg(const EulerEvaluator& ev);
// Samples of F on the same grid, as (j, F) pairs.
std::vector<std::pair<int, std::complex<double>>> grid_values(const EulerEvaluator& ev);

// sum_j integral over one grid cell of |F(s_j + it) - F(s_j)|^2, by
// Gauss-Legendre of the given order per cell (16 by default; doubling the
// order is the accuracy self-check).
double continuity_defect(const EulerEvaluator& ev, int gauss_order = 16);

// S_{m,f}(h) = Re sum_{p<=P} [ lambda(p) h(p) p^{-(1/2 + i m/log^{1.01}P)}
//            + (lambda(p^2) - lambda(p)^2/2) h(p)^2 p^{-(1 + 2 i m/log^{1.01}P)} ].
// Requires |m| <= M = 2 log^{1.02}P.
double s_truncation(int m, const EulerEvaluator& ev);

// Deterministic defect bound: |log|F(1/2 + i m/log^{1.01}P)| - S_{m,f}| is at
// most sum_{p<=P} (2/3) p^{-3/2} (1 - p^{-1/2})^{-1} for every draw.
double s_truncation_tail_bound(std::uint32_t P);

} // namespace twistlab
