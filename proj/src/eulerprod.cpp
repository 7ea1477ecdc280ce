#include "twistlab/eulerprod.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <omp.h>

#include "twistlab/parallel.hpp"
#include "twistlab/philox.hpp"
#include "twistlab/primes.hpp"
#include "twistlab/quadrature.hpp"

namespace twistlab {

using cplx = std::complex<double>;

SatakePair satake(double lambda_p) {
    if (std::abs(lambda_p) > 2.0 + 1e-9)
        throw std::invalid_argument("satake: |lambda(p)| exceeds the Deligne bound 2");
    double half = 0.5 * lambda_p;
    double disc = 1.0 - half * half;
    double im = disc > 0.0 ? std::sqrt(disc) : 0.0; // clamp the 1e-9 slack
    return {cplx{half, im}, cplx{half, -im}};
}

EulerEvaluator make_euler_evaluator(std::uint32_t P, const LambdaTable& lambda,
                                    const PhaseAssignment& phases) {
    if (lambda.limit < P) throw std::invalid_argument("make_euler_evaluator: lambda table shorter than P");
    if (phases.limit < P) throw std::invalid_argument("make_euler_evaluator: phase assignment shorter than P");
    EulerEvaluator ev;
    ev.P = P;
    ev.seed = phases.seed;
    ev.stream = phases.stream;
    ev.primes = primes_up_to(P);
    const std::size_t m = ev.primes.size();
    ev.lambda_p.resize(m);
    ev.lambda_p2.resize(m);
    ev.theta.resize(m);
    ev.alpha.resize(m);
    ev.log_p.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::uint32_t p = ev.primes[i];
        double lp = lambda.values[p];
        double lp2 = (static_cast<std::uint64_t>(p) * p <= lambda.limit)
                         ? lambda.values[static_cast<std::size_t>(p) * p]
                         : lp * lp - 1.0;
        if (std::abs(lp2 - (lp * lp - 1.0)) > 1e-10)
            throw std::invalid_argument("make_euler_evaluator: lambda(p^2) breaks the Hecke relation");
        SatakePair sp = satake(lp);
        ev.lambda_p[i] = lp;
        ev.lambda_p2[i] = lp2;
        ev.theta[i] = phases.theta_by_prime[p];
        ev.alpha[i] = sp.alpha;
        ev.log_p[i] = std::log(static_cast<double>(p));
    }
    return ev;
}

namespace {

// log of the two-factor term at one prime: -log(1-alpha h c) - log(1-beta h c)
// with c = p^{-s}.  |alpha h c| < 1 keeps both logs on the principal branch.
inline cplx log_factor(cplx alpha, cplx h, cplx c) {
    cplx hc = h * c;
    return -std::log(1.0 - alpha * hc) - std::log(1.0 - std::conj(alpha) * hc);
}

inline cplx unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

} // namespace

std::complex<double> euler_value(std::complex<double> s, const EulerEvaluator& ev) {
    if (s.real() < 0.4) throw std::invalid_argument("euler_value: Re(s) must be >= 0.4");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < ev.primes.size(); ++i) {
        cplx c = std::exp(-s * ev.log_p[i]);
        acc += log_factor(ev.alpha[i], unit(ev.theta[i]), c);
    }
    return std::exp(acc);
}

std::complex<double> band_product(int l, double x, std::complex<double> s, const EulerEvaluator& ev) {
    if (l < 0 || x <= 1.0) throw std::invalid_argument("band_product: need l >= 0 and x > 1");
    if (s.real() < 0.4) throw std::invalid_argument("band_product: Re(s) must be >= 0.4");
    double hi = std::pow(x, std::exp(-(l + 1.0)));
    double lo = std::pow(x, std::exp(-(l + 2.0)));
    if (hi > static_cast<double>(ev.P) * (1.0 + 1e-12))
        throw std::invalid_argument("band_product: band extends past the prime table");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < ev.primes.size(); ++i) {
        double p = static_cast<double>(ev.primes[i]);
        if (p <= lo) continue;
        if (p > hi) break;
        cplx c = std::exp(-s * ev.log_p[i]);
        acc += log_factor(ev.alpha[i], unit(ev.theta[i]), c);
    }
    return std::exp(acc);
}

double per_prime_second_moment(double lambda_p, double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("per_prime_second_moment: need 0 < r < 1");
    const double t = r * r;
    // lambda(p^j) by the three-term recursion; stop once the Deligne tail
    // sum_{i>=J} (i+1)^2 t^i is provably below 1e-14.
    double prev = 1.0, cur = lambda_p;
    double acc = 1.0;
    double tj = t;
    const double a1 = 1.0 / (1.0 - t);
    const double a2 = t / ((1.0 - t) * (1.0 - t));
    const double a3 = t * (1.0 + t) / ((1.0 - t) * (1.0 - t) * (1.0 - t));
    for (int j = 1;; ++j) {
        acc += cur * cur * tj;
        double next = lambda_p * cur - prev;
        prev = cur;
        cur = next;
        tj *= t;
        double J = static_cast<double>(j + 1);
        double tail = tj * (J * J * a1 + 2.0 * J * a2 + a3);
        if (tail < 1e-14) break;
        if (j > 4000) break; // cannot trigger for r <= 2^{-1/2}
    }
    return acc;
}

IdentityCheck mc_expectation_identity(double z, double y, const MomentExponents& me,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const LambdaTable& lambda) {
    if (me.a < 0 || me.b < 0 || me.sigma1 < 0 || me.sigma2 < 0)
        throw std::invalid_argument("mc_expectation_identity: a, b, sigma1, sigma2 must be >= 0");
    double lo_req = 100.0 * (1.0 + std::max(me.a * me.a, me.b * me.b));
    if (!(lo_req <= z && z < y && y <= 1e5))
        throw std::invalid_argument("mc_expectation_identity: need 100(1+max(a^2,b^2)) <= z < y <= 10^5");
    if (trials < 2) throw std::invalid_argument("mc_expectation_identity: trials must be >= 2");
    if (lambda.limit < static_cast<std::uint32_t>(y))
        throw std::invalid_argument("mc_expectation_identity: lambda table shorter than y");

    // primes with z <= p <= y; the closed-form sum runs over the same range
    // as the product
    std::vector<std::uint32_t> primes;
    for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(y)))
        if (static_cast<double>(p) >= z) primes.push_back(p);

    const std::size_t m = primes.size();
    std::vector<cplx> alpha(m), c1(m), c2(m);
    double closed = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double p = primes[i];
        double lp = lambda.values[primes[i]];
        alpha[i] = satake(lp).alpha;
        double lg = std::log(p);
        c1[i] = std::exp(cplx{-(0.5 + me.sigma1), -me.t1} * lg);
        c2[i] = std::exp(cplx{-(0.5 + me.sigma2), -me.t2} * lg);
        double l2 = lp * lp;
        closed += me.a * me.a * l2 / std::pow(p, 1.0 + 2.0 * me.sigma1) +
                  me.b * me.b * l2 / std::pow(p, 1.0 + 2.0 * me.sigma2) +
                  2.0 * me.a * me.b * l2 * std::cos((me.t2 - me.t1) * lg) /
                      std::pow(p, 1.0 + me.sigma1 + me.sigma2);
    }

    std::vector<double> per_trial(trials);
    const int threads = worker_count();
#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
        double lg = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            cplx h = unit(steinhaus_phase(seed, static_cast<std::uint64_t>(t), primes[i]));
            // |1-alpha h c|^{-2a} |1-beta h c|^{-2a} contributes
            // -a * log(|1-alpha h c|^2 |1-beta h c|^2) to log of the product.
            if (me.a != 0.0) {
                cplx hc = h * c1[i];
                lg -= me.a * std::log(std::norm(1.0 - alpha[i] * hc) * std::norm(1.0 - std::conj(alpha[i]) * hc));
            }
            if (me.b != 0.0) {
                cplx hc = h * c2[i];
                lg -= me.b * std::log(std::norm(1.0 - alpha[i] * hc) * std::norm(1.0 - std::conj(alpha[i]) * hc));
            }
        }
        per_trial[static_cast<std::size_t>(t)] = std::exp(lg);
    }

    IdentityCheck out;
    out.closed_form = std::exp(closed);
    out.mc.trials = trials;
    out.mc.seed = seed;
    double mean = 0.0;
    for (double v : per_trial) mean += v;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : per_trial) var += (v - mean) * (v - mean);
    var /= static_cast<double>(trials - 1);
    out.mc.value = mean;
    out.mc.std_error = std::sqrt(var / static_cast<double>(trials));
    return out;
}

IdentityCheck second_moment_identity(std::uint32_t P, double t, std::uint64_t trials,
                                     std::uint64_t seed, const LambdaTable& lambda) {
    if (P > 10'000) throw std::invalid_argument("second_moment_identity: exact side capped at P <= 10^4");
    if (P < 2) throw std::invalid_argument("second_moment_identity: P must be >= 2");
    if (trials < 2) throw std::invalid_argument("second_moment_identity: trials must be >= 2");
    if (lambda.limit < P) throw std::invalid_argument("second_moment_identity: lambda table shorter than P");

    auto primes = primes_up_to(P);
    const std::size_t m = primes.size();
    std::vector<cplx> alpha(m), c(m);
    double exact = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        double p = primes[i];
        double lp = lambda.values[primes[i]];
        alpha[i] = satake(lp).alpha;
        c[i] = std::exp(cplx{-0.5, -t} * std::log(p));
        exact *= per_prime_second_moment(lp, 1.0 / std::sqrt(p));
    }

    std::vector<double> per_trial(trials);
    const int threads = worker_count();
#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1)
    for (std::int64_t tr = 0; tr < static_cast<std::int64_t>(trials); ++tr) {
        double lg = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            cplx h = unit(steinhaus_phase(seed, static_cast<std::uint64_t>(tr), primes[i]));
            cplx hc = h * c[i];
            lg -= std::log(std::norm(1.0 - alpha[i] * hc) * std::norm(1.0 - std::conj(alpha[i]) * hc));
        }
        per_trial[static_cast<std::size_t>(tr)] = std::exp(lg); // |F|^2
    }

    IdentityCheck out;
    out.closed_form = exact;
    out.mc.trials = trials;
    out.mc.seed = seed;
    double mean = 0.0;
    for (double v : per_trial) mean += v;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : per_trial) var += (v - mean) * (v - mean);
    var /= static_cast<double>(trials - 1);
    out.mc.value = mean;
    out.mc.std_error = std::sqrt(var / static_cast<double>(trials));
    return out;
}

namespace {

double grid_spacing_exponent(std::uint32_t P) { return std::pow(std::log(static_cast<double>(P)), 1.01); }

void require_grid_range(std::uint32_t P) {
    if (P < 100) throw std::invalid_argument("grid operations require P >= 100");
}

} // namespace

std::vector<std::pair<int, std::complex<double>>> grid_values(const EulerEvaluator& ev) {
    require_grid_range(ev.P);
    const double G = grid_spacing_exponent(ev.P);
    const int jmax = static_cast<int>(std::floor(G / 2.0));
    std::vector<std::pair<int, cplx>> out;
    out.reserve(2 * jmax + 1);
    for (int j = -jmax; j <= jmax; ++j)
        out.emplace_back(j, euler_value(cplx{0.5, static_cast<double>(j) / G}, ev));
    return out;
}

double discrete_grid_avg(const EulerEvaluator& ev) {
    require_grid_range(ev.P);
    const double G = grid_spacing_exponent(ev.P);
    double acc = 0.0;
    for (const auto& [j, F] : grid_values(ev)) acc += std::norm(F);
    return acc / G;
}

double continuity_defect(const EulerEvaluator& ev, int gauss_order) {
    require_grid_range(ev.P);
    const double G = grid_spacing_exponent(ev.P);
    const int jmax = static_cast<int>(std::floor(G / 2.0));
    const double halfcell = 0.5 / G;
    const GaussRule rule = gauss_legendre(gauss_order);
    double acc = 0.0;
    for (int j = -jmax; j <= jmax; ++j) {
        const double tj = static_cast<double>(j) / G;
        const cplx F0 = euler_value(cplx{0.5, tj}, ev);
        acc += integrate_gauss(rule, -halfcell, halfcell, [&](double t) {
            return std::norm(euler_value(cplx{0.5, tj + t}, ev) - F0);
        });
    }
    return acc;
}

double s_truncation(int m, const EulerEvaluator& ev) {
    if (ev.P < 2) return 0.0; // empty prime sum
    const double lp = std::log(static_cast<double>(ev.P));
    const double M = 2.0 * std::pow(lp, 1.02);
    if (std::abs(static_cast<double>(m)) > M)
        throw std::invalid_argument("s_truncation: |m| exceeds M = 2 log^{1.02} P");
    const double G = std::pow(lp, 1.01);
    double acc = 0.0;
    for (std::size_t i = 0; i < ev.primes.size(); ++i) {
        const double lg = ev.log_p[i];
        const cplx c = std::exp(cplx{-0.5, -static_cast<double>(m) / G} * lg);
        const cplx h = unit(ev.theta[i]);
        acc += ev.lambda_p[i] * (h * c).real();
        acc += (ev.lambda_p2[i] - 0.5 * ev.lambda_p[i] * ev.lambda_p[i]) * (h * h * c * c).real();
    }
    return acc;
}

double s_truncation_tail_bound(std::uint32_t P) {
    double acc = 0.0;
    for (std::uint32_t p : primes_up_to(P)) {
        double rp = 1.0 / std::sqrt(static_cast<double>(p));
        acc += (2.0 / 3.0) * rp * rp * rp / (1.0 - rp);
    }
    return acc;
}

} // namespace twistlab
