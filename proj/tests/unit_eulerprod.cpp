#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "support/oracles.hpp"
#include "twistlab/coefficients.hpp"
#include "twistlab/eulerprod.hpp"
#include "twistlab/primes.hpp"
#include "twistlab/randmult.hpp"

using namespace twistlab;
using cplx = std::complex<double>;

namespace {

const LambdaTable& lam() {
    static LambdaTable t = lambda_from_tau(tau_exact(20000));
    return t;
}

PhaseAssignment zero_phases(std::uint32_t limit) {
    PhaseAssignment pa = sample_phases(std::max(limit, 2u), 1);
    for (auto& t : pa.theta_by_prime) t = 0.0;
    return pa;
}

} // namespace

TEST_CASE("satake pairs") {
    auto one = satake(2.0);
    CHECK(one.alpha == cplx{1.0, 0.0});
    CHECK(one.beta == cplx{1.0, 0.0});

    auto ii = satake(0.0);
    CHECK(std::abs(ii.alpha - cplx{0.0, 1.0}) < 1e-15);
    CHECK(std::abs(ii.beta - cplx{0.0, -1.0}) < 1e-15);

    double l2 = lam().values[2];
    auto s2 = satake(l2);
    CHECK(s2.alpha.real() == doctest::Approx(-0.265165).epsilon(1e-5));
    CHECK(s2.alpha.imag() == doctest::Approx(0.964203).epsilon(1e-5));
    CHECK(std::abs(s2.alpha + s2.beta - cplx{l2, 0.0}) < 1e-12);
    CHECK(std::abs(s2.alpha * s2.beta - cplx{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(std::abs(s2.alpha) - 1.0) < 1e-12);

    CHECK_THROWS_AS(static_cast<void>(satake(2.1)), std::invalid_argument);
}

TEST_CASE("satake closure: power sums reproduce the Hecke recursion") {
    for (std::uint32_t p : {2u, 3u, 5u, 13u}) {
        double lp = lam().values[p];
        auto sp = satake(lp);
        auto rec = oracle::hecke_prime_powers(lp, 20);
        for (int j = 0; j <= 20; ++j) {
            cplx acc{0.0, 0.0};
            for (int i = 0; i <= j; ++i) acc += std::pow(sp.alpha, j - i) * std::pow(sp.beta, i);
            CHECK(std::abs(acc - cplx{rec[j], 0.0}) < 1e-10);
        }
    }
}

TEST_CASE("euler_value: degenerate, conjugate-paired, and pinned values") {
    auto ev1 = make_euler_evaluator(1, lam(), sample_phases(2, 1));
    CHECK(euler_value(cplx{0.5, 0.3}, ev1) == cplx{1.0, 0.0}); // empty product

    auto evz = make_euler_evaluator(50, lam(), zero_phases(50));
    cplx real_s = euler_value(cplx{0.7, 0.0}, evz);
    CHECK(real_s.real() > 0.0);
    CHECK(std::abs(real_s.imag()) < 1e-12);

    // P=2, theta_2=0, s=1/2: (1 - lambda(2)/sqrt(2) + 1/2)^{-1} = 1/1.875
    auto ev2 = make_euler_evaluator(2, lam(), zero_phases(2));
    cplx v = euler_value(cplx{0.5, 0.0}, ev2);
    CHECK(v.real() == doctest::Approx(1.0 / 1.875).epsilon(1e-12));
    CHECK(std::abs(v.imag()) < 1e-14);

    CHECK_THROWS_AS(static_cast<void>(euler_value(cplx{0.39, 0.0}, ev2)), std::invalid_argument);
}

TEST_CASE("product equals the smooth Dirichlet series in its convergence range") {
    const std::uint32_t P = 50;
    auto pa = sample_phases(P, 31);
    auto ev = make_euler_evaluator(P, lam(), pa);
    const cplx s{1.2, 0.4};
    cplx prod = euler_value(s, ev);
    double prev = 1e300;
    for (std::uint32_t N : {100u, 1000u, 10000u}) {
        cplx partial = oracle::smooth_dirichlet_partial(P, N, s, lam(), pa.theta_by_prime);
        double diff = std::abs(partial - prod);
        CHECK(diff < prev * 1.01); // monotone envelope
        prev = diff;
    }
    CHECK(prev < 2e-3);
}

TEST_CASE("band products tile the full product") {
    const double x = 10000.0;
    const auto cutoff = static_cast<std::uint32_t>(std::pow(x, std::exp(-1.0))); // 29
    auto pa = sample_phases(64, 17);
    auto ev = make_euler_evaluator(64, lam(), pa);
    auto ev_cut = make_euler_evaluator(cutoff, lam(), pa);
    const cplx s{0.5, 0.25};

    cplx tiles{1.0, 0.0};
    for (int l = 0; l <= 3; ++l) tiles *= band_product(l, x, s, ev);
    cplx whole = euler_value(s, ev_cut);
    CHECK(std::abs(tiles - whole) <= 1e-10 * std::abs(whole));

    // single-prime band: x chosen so the band is exactly {2}
    const double xs = std::pow(2.0, std::exp(1.0));
    cplx single = band_product(0, xs, s, ev);
    auto sp = satake(lam().values[2]);
    cplx h2{std::cos(pa.theta(2)), std::sin(pa.theta(2))};
    cplx c = std::exp(-s * std::log(2.0));
    cplx expect = 1.0 / ((1.0 - sp.alpha * h2 * c) * (1.0 - sp.beta * h2 * c));
    CHECK(std::abs(single - expect) < 1e-12);

    // empty band inside the table
    cplx none = band_product(1, 6.0, s, ev); // (6^{e^-3}, 6^{e^-2}] = (1.09, 1.27]
    CHECK(none == cplx{1.0, 0.0});

    CHECK_THROWS_AS(static_cast<void>(band_product(0, 1e9, s, ev)), std::invalid_argument);
}

TEST_CASE("per-prime second moment: closed forms and quadrature oracle") {
    // lambda(p)=0: even powers alternate +-1, odd vanish -> 1/(1-r^4)
    for (double r : {0.3, 0.62}) CHECK(per_prime_second_moment(0.0, r) == doctest::Approx(1.0 / (1.0 - std::pow(r, 4))).epsilon(1e-12));
    CHECK(per_prime_second_moment(1.3, 1e-8) == doctest::Approx(1.0).epsilon(1e-12));

    for (std::uint32_t p : {2u, 3u, 7u}) {
        double lp = lam().values[p];
        for (double r : {0.3, 1.0 / std::sqrt(2.0)}) {
            double series = per_prime_second_moment(lp, r);
            double quad = oracle::phase_average_second_moment(lp, r);
            CHECK(std::abs(series - quad) <= 1e-10 * std::max(1.0, quad));
        }
    }
    CHECK_THROWS_AS(static_cast<void>(per_prime_second_moment(0.5, 1.0)), std::invalid_argument);
}

TEST_CASE("expectation identity: degenerate and statistical checks") {
    MomentExponents zero{};
    auto chk = mc_expectation_identity(500, 2000, zero, 16, 9, lam());
    CHECK(chk.mc.value == 1.0);
    CHECK(chk.mc.std_error == 0.0);
    CHECK(chk.closed_form == 1.0);

    MomentExponents me{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    auto c1 = mc_expectation_identity(500, 5000, me, 2000, 11, lam());
    CHECK(std::abs(c1.mc.value - c1.closed_form) <= 4.0 * c1.mc.std_error);

    MomentExponents half{0.5, 0.5, 0.0, 0.0, 0.0, 5.0};
    auto c2 = mc_expectation_identity(500, 5000, half, 2000, 12, lam());
    CHECK(std::abs(c2.mc.value - c2.closed_form) <= 4.0 * c2.mc.std_error);

    MomentExponents bad{-0.5, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(static_cast<void>(mc_expectation_identity(500, 5000, bad, 100, 1, lam())),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(mc_expectation_identity(150, 5000, me, 100, 1, lam())),
                    std::invalid_argument); // z below 100(1+max(a^2,b^2)) = 200
}

TEST_CASE("second-moment identity: exact side and MC") {
    double byhand = 0.0;
    auto l2pow = oracle::hecke_prime_powers(lam().values[2], 60);
    for (int j = 0; j <= 60; ++j) byhand += l2pow[j] * l2pow[j] * std::pow(0.5, j);
    auto p2 = second_moment_identity(2, 0.0, 16, 3, lam());
    CHECK(p2.closed_form == doctest::Approx(byhand).epsilon(1e-12));
    CHECK(p2.closed_form == doctest::Approx(1.42).epsilon(0.01));

    auto p3 = second_moment_identity(3, 0.0, 16, 3, lam());
    CHECK(p3.closed_form ==
          doctest::Approx(p2.closed_form * per_prime_second_moment(lam().values[3], 1.0 / std::sqrt(3.0)))
              .epsilon(1e-12));

    // exact side carries no t
    auto ta = second_moment_identity(100, 0.0, 16, 3, lam());
    auto tb = second_moment_identity(100, 0.3, 16, 3, lam());
    CHECK(ta.closed_form == tb.closed_form);

    auto mc = second_moment_identity(100, 0.3, 4000, 21, lam());
    CHECK(std::abs(mc.mc.value - mc.closed_form) <= 3.0 * mc.mc.std_error);

    CHECK_THROWS_AS(static_cast<void>(second_moment_identity(20000, 0.0, 16, 3, lam())),
                    std::invalid_argument);
}

TEST_CASE("discrete grid average: draws and expectation") {
    auto ev = make_euler_evaluator(200, lam(), sample_phases(200, 5));
    double one = discrete_grid_avg(ev);
    CHECK(one >= 0.0);

    auto small = make_euler_evaluator(50, lam(), sample_phases(50, 5));
    CHECK_THROWS_AS(static_cast<void>(discrete_grid_avg(small)), std::invalid_argument);

    // E[grid average] = (#grid points / log^{1.01}P) * smooth second-moment series
    const std::uint32_t P = 200;
    const double G = std::pow(std::log(static_cast<double>(P)), 1.01);
    const auto jmax = static_cast<int>(std::floor(G / 2.0));
    double series = 1.0;
    for (std::uint32_t p : primes_up_to(P))
        series *= per_prime_second_moment(lam().values[p], 1.0 / std::sqrt(static_cast<double>(p)));
    const double target = series * (2.0 * jmax + 1.0) / G;

    const int trials = 1200;
    double mean = 0.0, sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        auto draw = make_euler_evaluator(P, lam(), sample_phases(P, 909, static_cast<std::uint64_t>(t)));
        double v = discrete_grid_avg(draw);
        mean += v;
        sq += v * v;
    }
    mean /= trials;
    double se = std::sqrt((sq / trials - mean * mean) / (trials - 1));
    CHECK(std::abs(mean - target) <= 3.0 * se);
}

TEST_CASE("continuity defect: nonnegative, quadrature self-check, pinned draw") {
    auto ev = make_euler_evaluator(150, lam(), sample_phases(150, 77));
    double d16 = continuity_defect(ev, 16);
    double d32 = continuity_defect(ev, 32);
    CHECK(d16 >= 0.0);
    CHECK(std::abs(d16 - d32) < 1e-6 * std::max(1.0, d16));

    auto evz = make_euler_evaluator(100, lam(), zero_phases(100));
    double pinned = continuity_defect(evz, 16);
    CHECK(pinned >= 0.0);
    CHECK(pinned == doctest::Approx(continuity_defect(evz, 32)).epsilon(1e-9));
}

TEST_CASE("s_truncation: empty product, range guard, algebraic identity") {
    auto ev1 = make_euler_evaluator(1, lam(), sample_phases(2, 1));
    CHECK(s_truncation(0, ev1) == 0.0);

    auto ev = make_euler_evaluator(1000, lam(), sample_phases(1000, 55));
    const double M = 2.0 * std::pow(std::log(1000.0), 1.02);
    CHECK_THROWS_AS(static_cast<void>(s_truncation(static_cast<int>(M) + 1, ev)), std::invalid_argument);

    // lambda(p^2) - lambda(p)^2/2 = (lambda(p^2) - 1)/2
    for (std::size_t i = 0; i < ev.primes.size(); ++i) {
        double a = ev.lambda_p2[i] - 0.5 * ev.lambda_p[i] * ev.lambda_p[i];
        double b = 0.5 * (ev.lambda_p2[i] - 1.0);
        CHECK(std::abs(a - b) <= 1e-12);
    }
}

TEST_CASE("log|F| stays within the tail bound of S_m for every draw") {
    const std::uint32_t P = 1000;
    const double bound = s_truncation_tail_bound(P);
    const double G = std::pow(std::log(static_cast<double>(P)), 1.01);
    const auto M = static_cast<int>(2.0 * std::pow(std::log(static_cast<double>(P)), 1.02));
    for (std::uint64_t draw = 0; draw < 20; ++draw) {
        auto ev = make_euler_evaluator(P, lam(), sample_phases(P, 4242, draw));
        for (int m = -M; m <= M; m += 3) {
            double s = s_truncation(m, ev);
            double logF = std::log(std::abs(euler_value(cplx{0.5, m / G}, ev)));
            CHECK(std::abs(logF - s) <= bound);
        }
    }
}
