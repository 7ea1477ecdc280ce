// Serial vs OpenMP comparison for the hot kernels, with an agreement column
// so a speedup never hides a divergence.
//
//   ./twistlab_bench [table_limit]

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "twistlab/chargroup.hpp"
#include "twistlab/coefficients.hpp"
#include "twistlab/fft.hpp"
#include "twistlab/ntt.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/randmult.hpp"

using namespace twistlab;

namespace {

template <typename F>
double time_s(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* kernel, double serial, double parallel, bool agree) {
    std::printf("%-32s %10.3f s %10.3f s %7.2fx   %s\n", kernel, serial, parallel, serial / parallel,
                agree ? "outputs identical" : "OUTPUT MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const std::uint32_t limit = argc > 1 ? static_cast<std::uint32_t>(std::atol(argv[1])) : 200000;
    const int hw = omp_get_max_threads();
    std::printf("workers: 1 vs %d\n\n", hw);
    std::printf("%-32s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const std::size_t L = 1 << 20;
        auto pr = ntt::kPrimes[0];
        ntt::Transformer tr(pr, L);
        std::mt19937_64 rng(1);
        std::vector<std::uint64_t> a(L);
        for (auto& v : a) v = rng() % pr.value;
        auto b = a;
        set_worker_count(1);
        double ts = time_s([&] { tr.forward(a.data(), false); tr.inverse(a.data(), false); });
        set_worker_count(hw);
        double tp = time_s([&] { tr.forward(b.data(), true); tr.inverse(b.data(), true); });
        report("ntt forward+inverse (2^20)", ts, tp, a == b);
    }

    {
        const std::size_t L = 1 << 20;
        std::mt19937_64 rng(2);
        std::vector<fft::cplx> a(L);
        for (auto& v : a)
            v = {std::uniform_real_distribution<double>(-1, 1)(rng),
                 std::uniform_real_distribution<double>(-1, 1)(rng)};
        auto b = a;
        set_worker_count(1);
        double ts = time_s([&] { fft::pow2_transform(a, -1, false); });
        set_worker_count(hw);
        double tp = time_s([&] { fft::pow2_transform(b, -1, true); });
        report("complex fft (2^20)", ts, tp, a == b);
    }

    {
        TauTable t1, t2;
        set_worker_count(1);
        double ts = time_s([&] { t1 = tau_exact(limit); });
        set_worker_count(hw);
        double tp = time_s([&] { t2 = tau_exact(limit); });
        report("tau table (NTT + CRT)", ts, tp, t1.values == t2.values);
    }

    LambdaTable lam = lambda_from_tau(tau_exact(limit));

    {
        const std::uint32_t q = 9973, x = 9000;
        CharacterGroup grp = build_group(q);
        CharSumVector direct, fast;
        set_worker_count(1);
        double ts = time_s([&] { direct = brute_char_sums(grp, x, lam); });
        set_worker_count(hw);
        double tp = time_s([&] { fast = all_char_sums(grp, x, lam); });
        double worst = 0.0;
        for (std::size_t t = 0; t < fast.sums.size(); ++t)
            worst = std::max(worst, std::abs(fast.sums[t] - direct.sums[t]));
        report("char sums: direct vs chirp-z", ts, tp, worst <= 1e-8);
    }

    {
        MCEstimate e1, e2;
        set_worker_count(1);
        double ts = time_s([&] { e1 = mc_moment(5000, 0.5, 4000, 77, lam); });
        set_worker_count(hw);
        double tp = time_s([&] { e2 = mc_moment(5000, 0.5, 4000, 77, lam); });
        report("mc_moment (x=5000, 4000 trials)", ts, tp,
               e1.value == e2.value && e1.std_error == e2.std_error);
    }

    set_worker_count(0);
    return 0;
}
