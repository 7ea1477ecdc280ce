#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twistlab/eulerprod.hpp"

namespace twistlab::oracle {

std::vector<tau_int> tau_brute_force(std::uint32_t N) {
    if (N < 1) throw std::invalid_argument("tau_brute_force: N must be >= 1");
    // c holds the coefficients of prod (1 - q^n)^24 up to degree N-1;
    // tau(m) is then the coefficient of q^{m-1}.
    std::vector<tau_int> c(N, tau_int{0});
    c[0] = 1;
    for (std::uint32_t n = 1; n < N; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (std::uint32_t j = N - 1; j >= n; --j) c[j] -= c[j - n];
        }
    }
    std::vector<tau_int> tau(static_cast<std::size_t>(N) + 1, tau_int{0});
    for (std::uint32_t m = 1; m <= N; ++m) tau[m] = c[m - 1];
    return tau;
}

std::vector<double> hecke_prime_powers(double lambda_p, int jmax) {
    std::vector<double> v(static_cast<std::size_t>(jmax) + 1);
    v[0] = 1.0;
    if (jmax >= 1) v[1] = lambda_p;
    for (int j = 2; j <= jmax; ++j) v[j] = lambda_p * v[j - 1] - v[j - 2];
    return v;
}

double phase_average_second_moment(double lambda_p, double r, int points) {
    SatakePair sp = satake(lambda_p);
    double acc = 0.0;
    for (int k = 0; k < points; ++k) {
        double t = 2.0 * std::numbers::pi * k / points;
        std::complex<double> z{r * std::cos(t), r * std::sin(t)};
        acc += 1.0 / (std::norm(1.0 - sp.alpha * z) * std::norm(1.0 - sp.beta * z));
    }
    return acc / points;
}

std::complex<double> smooth_dirichlet_partial(std::uint32_t P, std::uint32_t N, std::complex<double> s,
                                              const LambdaTable& lambda,
                                              const std::vector<double>& theta_by_prime) {
    std::complex<double> acc{0.0, 0.0};
    for (std::uint32_t n = 1; n <= N; ++n) {
        std::uint32_t m = n;
        double angle = 0.0;
        bool smooth = true;
        for (std::uint32_t p = 2; p <= m; ++p) {
            if (m % p) continue;
            if (p > P) { smooth = false; break; }
            while (m % p == 0) {
                m /= p;
                angle += theta_by_prime[p];
            }
        }
        if (!smooth) continue;
        std::complex<double> h{std::cos(angle), std::sin(angle)};
        acc += h * lambda.values[n] * std::exp(-s * std::log(static_cast<double>(n)));
    }
    return acc;
}

} // namespace twistlab::oracle
