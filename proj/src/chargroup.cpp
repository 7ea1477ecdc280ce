#include "twistlab/chargroup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <omp.h>

#include "twistlab/fft.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/primes.hpp"

namespace twistlab {

std::uint32_t find_primitive_root(std::uint32_t q) {
    if (q < 3 || !is_prime_u64(q)) throw std::invalid_argument("find_primitive_root: q must be an odd prime");
    std::uint32_t m = q - 1;
    std::vector<std::uint32_t> factors;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= m; ++d) {
        if (m % d == 0) {
            factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) factors.push_back(m);
    for (std::uint32_t g = 2; g < q; ++g) {
        bool ok = true;
        for (std::uint32_t r : factors) {
            if (powmod_u64(g, (q - 1) / r, q) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw std::logic_error("find_primitive_root: no generator found"); // unreachable for prime q
}

CharacterGroup build_group(std::uint32_t q) {
    if (q > kModulusCap) throw std::invalid_argument("build_group: q exceeds the 10^7+19 cap");
    CharacterGroup grp;
    grp.q = q;
    grp.g = find_primitive_root(q);
    grp.index.assign(q, 0);
    std::uint64_t cur = 1;
    for (std::uint32_t k = 0; k + 1 < q; ++k) {
        grp.index[static_cast<std::size_t>(cur)] = k;
        cur = cur * grp.g % q;
    }
    return grp;
}

namespace {

void check_sum_args(const CharacterGroup& group, std::uint32_t x, const LambdaTable& lambda) {
    if (group.q < 3 || group.index.size() != group.q) throw std::invalid_argument("char sums: malformed group");
    if (x < 1 || x > group.q) throw std::invalid_argument("char sums: x must satisfy 1 <= x <= q");
    if (lambda.limit < x) throw std::invalid_argument("char sums: lambda table too short");
}

} // namespace

CharSumVector all_char_sums(const CharacterGroup& group, std::uint32_t x, const LambdaTable& lambda) {
    check_sum_args(group, x, lambda);
    const std::uint32_t n = group.q - 1;

    // One bucket per character index; n = g^k is the unique preimage of k,
    // so this is a scatter, not a reduction, and any schedule gives the same
    // vector.
    std::vector<fft::cplx> a(n, fft::cplx{0.0, 0.0});
    const int threads = worker_count();
#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1 && x >= (1u << 15))
    for (std::int64_t m = 1; m <= static_cast<std::int64_t>(x); ++m) {
        if (m % group.q == 0) continue;
        a[group.index[static_cast<std::size_t>(m)]] = fft::cplx{lambda.values[static_cast<std::size_t>(m)], 0.0};
    }

    CharSumVector out;
    out.q = group.q;
    out.x = x;
    out.sums = fft::dft(a, +1, /*parallel=*/true);
    return out;
}

CharSumVector brute_char_sums(const CharacterGroup& group, std::uint32_t x, const LambdaTable& lambda) {
    if (group.q > 10'000) throw std::invalid_argument("brute_char_sums: q too large (O(qx) path is capped at 10^4)");
    check_sum_args(group, x, lambda);
    const std::uint32_t n = group.q - 1;

    std::vector<fft::cplx> roots(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        roots[j] = {std::cos(ang), std::sin(ang)};
    }

    CharSumVector out;
    out.q = group.q;
    out.x = x;
    out.sums.assign(n, fft::cplx{0.0, 0.0});
    const int threads = worker_count();
#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(n); ++t) {
        fft::cplx s{0.0, 0.0};
        for (std::uint32_t m = 1; m <= x; ++m) {
            if (m % group.q == 0) continue;
            std::uint64_t e = static_cast<std::uint64_t>(t) * group.index[m] % n;
            s += roots[static_cast<std::size_t>(e)] * lambda.values[m];
        }
        out.sums[static_cast<std::size_t>(t)] = s;
    }
    return out;
}

double moment(const CharSumVector& sums, double k) {
    if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("moment: k must lie in [0,1]");
    if (sums.sums.empty()) throw std::invalid_argument("moment: empty sum vector");
    if (k == 0.0) return 1.0; // |S|^0 = 1 for every character, 0^0 := 1
    double acc = 0.0;
    for (const auto& s : sums.sums) acc += std::pow(std::norm(s), k);
    return acc / static_cast<double>(sums.sums.size());
}

double theorem_bound(std::uint32_t x, std::uint32_t q, double k) {
    if (x < 1 || x > q) throw std::invalid_argument("theorem_bound: need 1 <= x <= q");
    if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("theorem_bound: k must lie in [0,1]");
    double L = std::min(static_cast<double>(x), static_cast<double>(q) / static_cast<double>(x));
    if (!(10.0 * L > std::exp(1.0))) throw std::invalid_argument("theorem_bound: 10L must exceed e");
    double denom = 1.0 + (1.0 - k) * std::sqrt(std::log(std::log(10.0 * L)));
    return std::pow(static_cast<double>(x) / denom, k);
}

MomentReport moment_report(const CharSumVector& sums, const std::vector<double>& k_values) {
    MomentReport rep;
    rep.q = sums.q;
    rep.x = sums.x;
    for (double k : k_values) {
        MomentReport::Entry e;
        e.k = k;
        e.moment = moment(sums, k);
        e.bound = theorem_bound(sums.x, sums.q, k);
        e.ratio = e.moment / e.bound;
        rep.entries.push_back(e);
    }
    return rep;
}

} // namespace twistlab
