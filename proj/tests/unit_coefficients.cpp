#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "twistlab/coefficients.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/primes.hpp"

using namespace twistlab;

namespace {

const TauTable& tau300() {
    static TauTable t = tau_exact(300);
    return t;
}

} // namespace

TEST_CASE("eta-cube series terms") {
    auto s0 = expand_eta_cube(0);
    REQUIRE(s0.terms.size() == 1);
    CHECK(s0.terms[0] == std::pair<std::int64_t, std::int64_t>{0, 1});

    auto s3 = expand_eta_cube(3);
    REQUIRE(s3.terms.size() == 3);
    CHECK(s3.terms[1] == std::pair<std::int64_t, std::int64_t>{1, -3});
    CHECK(s3.terms[2] == std::pair<std::int64_t, std::int64_t>{3, 5});

    auto s10 = expand_eta_cube(10);
    CHECK(s10.terms.back() == std::pair<std::int64_t, std::int64_t>{10, 9});

    CHECK_THROWS_AS(expand_eta_cube(-1), std::invalid_argument);
}

TEST_CASE("eta-cube term count formula") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        std::int64_t limit = static_cast<std::int64_t>(rng() % 100000);
        auto s = expand_eta_cube(limit);
        auto expect = static_cast<std::size_t>((std::sqrt(8.0 * static_cast<double>(limit) + 1.0) - 1.0) / 2.0) + 1;
        CHECK(s.terms.size() == expect);
        // invariant: coefficient at m(m+1)/2 is (-1)^m (2m+1)
        for (std::size_t m = 0; m < s.terms.size(); ++m) {
            CHECK(s.terms[m].first == static_cast<std::int64_t>(m * (m + 1) / 2));
            CHECK(s.terms[m].second == (m % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(2 * m + 1));
        }
    }
}

TEST_CASE("tau spot values and range errors") {
    CHECK(tau_exact(1).tau(1) == 1);
    const auto& t = tau300();
    CHECK(t.tau(1) == 1);
    CHECK(t.tau(2) == -24);
    CHECK(t.tau(3) == 252);
    CHECK(t.tau(4) == -1472);
    CHECK(t.tau(5) == 4830);
    CHECK(t.tau(6) == t.tau(2) * t.tau(3));
    CHECK(t.tau(9) == -113643);
    CHECK_THROWS_AS(tau_exact(0), std::invalid_argument);
    CHECK_THROWS_AS(tau_exact(kTauHardCap + 1), std::invalid_argument);
}

TEST_CASE("tau NTT path equals the brute-force product expansion") {
    auto brute = oracle::tau_brute_force(300);
    const auto& t = tau300();
    for (std::uint32_t n = 1; n <= 300; ++n) CHECK(t.tau(n) == brute[n]);
}

TEST_CASE("tau construction is worker-count independent") {
    set_worker_count(1);
    auto t1 = tau_exact(500);
    set_worker_count(2);
    auto t2 = tau_exact(500);
    set_worker_count(0);
    CHECK(t1.values == t2.values);
}

TEST_CASE("exact Hecke identity at small primes") {
    const auto& t = tau300();
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        tau_int lhs = t.tau(p) * t.tau(p) - t.tau(p * p);
        tau_int rhs = pow(tau_int(p), 11);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("integer Deligne bound: tau(n)^2 <= d(n)^2 n^11 exactly") {
    auto t = tau_exact(2000);
    auto d = divisor_count_table(2000);
    for (std::uint32_t n = 1; n <= 2000; ++n) {
        tau_int lhs = t.tau(n) * t.tau(n);
        tau_int rhs = tau_int(d[n]) * d[n] * pow(tau_int(n), 11);
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("exact multiplicativity on sampled coprime pairs") {
    const auto& t = tau300();
    std::mt19937_64 rng(17);
    int checked = 0;
    while (checked < 300) {
        std::uint32_t m = 2 + rng() % 40, n = 2 + rng() % 40;
        if (std::gcd(m, n) != 1 || m * n > 300) continue;
        CHECK(t.tau(m * n) == t.tau(m) * t.tau(n));
        ++checked;
    }
}

TEST_CASE("lambda(p)^2 - lambda(p^2) = 1 within 1e-10") {
    auto lam = lambda_from_tau(tau_exact(2000));
    for (std::uint32_t p : primes_up_to(44)) {
        double lp = lam.values[p], lp2 = lam.values[p * p];
        CHECK(std::abs(lp * lp - lp2 - 1.0) <= 1e-10);
    }
}

TEST_CASE("lambda from tau: exact and rounded values") {
    auto lam = lambda_from_tau(tau300());
    CHECK(lam.values[1] == 1.0);
    CHECK(lam.values[4] == -0.71875); // -1472 / 2^11, exact in binary
    CHECK(lam.values[2] == doctest::Approx(-0.5303300859).epsilon(1e-9));
    CHECK(lam.values[3] == doctest::Approx(0.5987336125).epsilon(1e-9));
}

TEST_CASE("Hecke sieve route matches the tau route") {
    const std::uint32_t N = 3000;
    auto tau = tau_exact(N);
    auto direct = lambda_from_tau(tau);
    std::unordered_map<std::uint32_t, double> pv;
    for (std::uint32_t p : primes_up_to(N)) pv[p] = direct.values[p];
    auto sieved = lambda_extend_hecke(pv, N);
    for (std::uint32_t n = 1; n <= N; ++n) {
        double tol = 1e-9 * std::max(1.0, std::abs(direct.values[n]));
        CHECK(std::abs(direct.values[n] - sieved.values[n]) <= tol);
    }
    CHECK(sieved.values[4] == doctest::Approx(-0.71875).epsilon(1e-12));
    CHECK(sieved.values[9] == doctest::Approx(-0.641518).epsilon(1e-5));
}

TEST_CASE("Hecke sieve names the missing prime") {
    std::unordered_map<std::uint32_t, double> pv{{2, -0.53}, {3, 0.59}, {5, 0.69}};
    CHECK_THROWS_WITH_AS(static_cast<void>(lambda_extend_hecke(pv, 10)),
                         doctest::Contains("prime 7"), std::invalid_argument);
}

TEST_CASE("Deligne bound and coprime multiplicativity") {
    const std::uint32_t N = 10000;
    auto lam = lambda_from_tau(tau_exact(N));
    auto d = divisor_count_table(N);
    for (std::uint32_t n = 1; n <= N; ++n) CHECK(std::abs(lam.values[n]) <= d[n] * (1.0 + 1e-12));

    std::mt19937_64 rng(3);
    int checked = 0;
    while (checked < 500) {
        std::uint32_t m = 2 + rng() % 99, n = 2 + rng() % 99;
        if (std::gcd(m, n) != 1 || m * n > N) continue;
        CHECK(std::abs(lam.values[m * n] - lam.values[m] * lam.values[n]) <= 1e-9 * d[m * n]);
        ++checked;
    }
}

TEST_CASE("CSV export shape") {
    auto tau = tau_exact(10);
    auto lam = lambda_from_tau(tau);
    std::ostringstream os;
    write_tau_csv(tau, lam, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,tau,lambda");
    std::getline(is, line);
    CHECK(line == "1,1,1");
    std::getline(is, line);
    CHECK(line.rfind("2,-24,", 0) == 0);
}

TEST_CASE("binary cache: roundtrip, byte identity, rejects junk") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "twistlab_cache_test";
    fs::create_directories(dir);
    fs::path file = dir / "tau.bin";

    auto tau = tau_exact(64);
    auto lam = lambda_from_tau(tau);
    save_tau_cache(file, tau, lam);
    auto loaded = load_tau_cache(file);
    REQUIRE(loaded.has_value());
    CHECK(loaded->first.values == tau.values);
    CHECK(loaded->second.values == lam.values); // bitwise: doubles round-trip through raw bytes

    // regeneration is byte-identical
    fs::path file2 = dir / "tau2.bin";
    save_tau_cache(file2, tau, lam);
    std::ifstream a(file, std::ios::binary), b(file2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), {});
    std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);

    // pinned layout: magic, version byte, little-endian N, then
    // tau(1) = 1 as varint 0x02 and the 8 raw bytes of lambda(1) = 1.0
    REQUIRE(sa.size() >= 22);
    CHECK(sa.substr(0, 4) == "TAU1");
    CHECK(static_cast<unsigned char>(sa[4]) == 1);
    CHECK(static_cast<unsigned char>(sa[5]) == 64); // N = 64, LE
    for (int i = 6; i < 13; ++i) CHECK(sa[i] == 0);
    CHECK(static_cast<unsigned char>(sa[13]) == 0x02);
    std::uint64_t one_bits;
    double one = 1.0;
    std::memcpy(&one_bits, &one, 8);
    for (int i = 0; i < 8; ++i)
        CHECK(static_cast<unsigned char>(sa[14 + i]) == ((one_bits >> (8 * i)) & 0xff));

    CHECK_FALSE(load_tau_cache(dir / "missing.bin").has_value());
    std::ofstream junk(dir / "junk.bin", std::ios::binary);
    junk << "NOPE";
    junk.close();
    CHECK_FALSE(load_tau_cache(dir / "junk.bin").has_value());
    // truncated payload is malformed, not a silent miss
    std::ofstream trunc(dir / "trunc.bin", std::ios::binary);
    trunc << sa.substr(0, sa.size() / 2);
    trunc.close();
    CHECK_THROWS_AS(static_cast<void>(load_tau_cache(dir / "trunc.bin")), std::runtime_error);

    auto [ct, cl] = tables_cached(64, dir);
    CHECK(ct.values == tau.values);
    CHECK(cl.values == lam.values);
    fs::remove_all(dir);
}
