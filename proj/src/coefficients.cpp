#include "twistlab/coefficients.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "twistlab/ntt.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/primes.hpp"

namespace twistlab {

EtaCubeSeries expand_eta_cube(std::int64_t limit) {
    if (limit < 0) throw std::invalid_argument("expand_eta_cube: limit must be >= 0");
    EtaCubeSeries s;
    s.limit = limit;
    for (std::int64_t m = 0;; ++m) {
        std::int64_t e = m * (m + 1) / 2;
        if (e > limit) break;
        s.terms.emplace_back(e, (m % 2 == 0 ? 1 : -1) * (2 * m + 1));
    }
    return s;
}

namespace {

// ---------------------------------------------------------------------------
// Reconstruction bound for the CRT step.
//
// Only coefficients of the eighth power are ever reconstructed, and Deligne's
// bound |tau(n)| <= d(n) n^{11/2} caps them at n = 10^6 by 240 * 10^33 < 2^118.
// For headroom, the raw convolution values behind any single squaring are
// also small: with E = sum (-1)^m (2m+1) q^{m(m+1)/2},
//   |E(i)|   <= sqrt(8i+1),
//   |E^2(i)| <= (sqrt(2i)+1)(4i+1)        (pairs of triangular numbers)
//   |E^4(i)| <= (i+1) max|E^2|^2          < 4.1 i^4
//   |E^8(i)| <= (i+1) max|E^4|^2          < 0.07 i^9 < 2^185   (i <= 2*10^6).
// The five moduli provide prod p > 2^309 , i.e. 2^308 of signed capacity, so
// recombination cannot wrap.  The bit-length check below is unreachable by
// this sizing and exists to turn a regression into a loud failure.
// ---------------------------------------------------------------------------
constexpr unsigned kTauMaxBits = 140;

std::size_t next_pow2(std::size_t n) {
    std::size_t L = 1;
    while (L < n) L <<= 1;
    return L;
}

} // namespace

TauTable tau_exact(std::uint32_t N) {
    if (N < 1 || N > kTauHardCap) throw std::invalid_argument("tau_exact: N must be in [1, 10^6]");

    const EtaCubeSeries eta = expand_eta_cube(static_cast<std::int64_t>(N) - 1);
    const std::size_t L = next_pow2(std::max<std::size_t>(2 * static_cast<std::size_t>(N), 2));
    constexpr int P = static_cast<int>(ntt::kPrimes.size());

    // E^8 mod p_i for exponents 0..N-1, one residue vector per prime.
    std::array<std::vector<std::uint64_t>, P> residue;
    const int threads = worker_count();
#pragma omp parallel for num_threads(std::min(threads, P)) schedule(dynamic, 1) if (threads > 1)
    for (int i = 0; i < P; ++i) {
        const ntt::Transformer tr(ntt::kPrimes[i], L);
        const ntt::Montgomery& f = tr.field();
        const std::uint64_t p = f.modulus();

        std::vector<std::uint64_t> a(L, 0);
        for (const auto& [e, c] : eta.terms)
            a[static_cast<std::size_t>(e)] = c >= 0 ? static_cast<std::uint64_t>(c)
                                                    : p - static_cast<std::uint64_t>(-c);
        for (int squaring = 0; squaring < 3; ++squaring) {
            tr.forward(a.data(), /*parallel=*/threads > P);
            for (std::size_t j = 0; j < L; ++j) a[j] = f.mul(f.to_mont(a[j]), a[j]);
            tr.inverse(a.data(), /*parallel=*/threads > P);
            // Exponents >= N cannot influence exponents < N in later
            // squarings; dropping them keeps every later product wrap-free.
            for (std::size_t j = N; j < L; ++j) a[j] = 0;
        }
        a.resize(N);
        residue[i] = std::move(a);
    }

    // Garner recombination.  inv[i] = (p_0 ... p_{i-1})^{-1} mod p_i and
    // pmod[j][i] = p_j mod p_i; digits d satisfy
    //   x = d_0 + d_1 p_0 + d_2 p_0 p_1 + ... (mixed radix).
    std::array<std::uint64_t, P> pv{};
    for (int i = 0; i < P; ++i) pv[i] = ntt::kPrimes[i].value;
    std::array<std::uint64_t, P> inv{};
    std::array<std::array<std::uint64_t, P>, P> pmod{};
    for (int i = 0; i < P; ++i) {
        std::uint64_t prod = 1 % pv[i];
        for (int j = 0; j < i; ++j) {
            pmod[j][i] = pv[j] % pv[i];
            prod = mulmod_u64(prod, pmod[j][i], pv[i]);
        }
        inv[i] = i == 0 ? 0 : powmod_u64(prod, pv[i] - 2, pv[i]);
    }
    tau_int modulus_product = 1;
    for (int i = 0; i < P; ++i) modulus_product *= pv[i];
    const tau_int half_product = modulus_product / 2;

    TauTable table;
    table.limit = N;
    table.values.assign(static_cast<std::size_t>(N) + 1, tau_int{0});

    // An exception may not leave an OpenMP region, so the (unreachable)
    // overflow panic is carried out by flag.
    std::atomic<bool> overflow{false};

#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1 && N >= 4096)
    for (std::int64_t n = 1; n <= static_cast<std::int64_t>(N); ++n) {
        const std::size_t idx = static_cast<std::size_t>(n - 1);
        // d_i = (r_i - (d_0 + d_1 p_0 + d_2 p_0 p_1 + ...)) * inv_i mod p_i
        std::array<std::uint64_t, P> digit{};
        digit[0] = residue[0][idx];
        for (int i = 1; i < P; ++i) {
            std::uint64_t x = digit[0] % pv[i];
            std::uint64_t scale = 1;
            for (int j = 1; j < i; ++j) {
                scale = mulmod_u64(scale, pmod[j - 1][i], pv[i]);
                x = (x + mulmod_u64(digit[j] % pv[i], scale, pv[i])) % pv[i];
            }
            std::uint64_t r = residue[i][idx] % pv[i];
            std::uint64_t diff = r >= x ? r - x : r + pv[i] - x;
            digit[i] = mulmod_u64(diff, inv[i], pv[i]);
        }
        tau_int x = digit[P - 1];
        for (int i = P - 2; i >= 0; --i) {
            x *= pv[i];
            x += digit[i];
        }
        if (x > half_product) x -= modulus_product;
        if (abs(x) > (tau_int(1) << kTauMaxBits)) overflow.store(true, std::memory_order_relaxed);
        table.values[static_cast<std::size_t>(n)] = std::move(x);
    }
    if (overflow.load())
        throw std::runtime_error("tau_exact: CRT reconstruction exceeded the documented bound");
    return table;
}

LambdaTable lambda_from_tau(const TauTable& tau) {
    if (tau.limit < 1 || tau.values.size() != static_cast<std::size_t>(tau.limit) + 1)
        throw std::invalid_argument("lambda_from_tau: malformed tau table");
    LambdaTable lam;
    lam.limit = tau.limit;
    lam.values.assign(tau.values.size(), 0.0);
    lam.values[1] = 1.0;
    // Two correctly rounded steps (integer -> double, then one division by the
    // double power) keep the per-entry error below 1e-12 absolute, since
    // |lambda(n)| <= d(n) and each step contributes at most half an ulp.
    for (std::uint32_t n = 2; n <= tau.limit; ++n) {
        double num = tau.values[n].convert_to<double>();
        lam.values[n] = num / std::pow(static_cast<double>(n), 5.5);
    }
    return lam;
}

LambdaTable lambda_extend_hecke(const std::unordered_map<std::uint32_t, double>& prime_values,
                                std::uint32_t N) {
    if (N < 1) throw std::invalid_argument("lambda_extend_hecke: N must be >= 1");
    LambdaTable lam;
    lam.limit = N;
    lam.values.assign(static_cast<std::size_t>(N) + 1, 0.0);
    lam.values[1] = 1.0;
    if (N == 1) return lam;

    SpfTable spf(N);
    for (std::uint32_t p : spf.primes()) {
        auto it = prime_values.find(p);
        if (it == prime_values.end())
            throw std::invalid_argument("lambda_extend_hecke: missing value for prime " + std::to_string(p));
        lam.values[p] = it->second;
    }
    for (std::uint32_t n = 2; n <= N; ++n) {
        std::uint32_t pw = spf.prime_power_part(n);
        if (pw != n) {
            lam.values[n] = lam.values[pw] * lam.values[n / pw];
        } else if (spf.spf(n) != n) { // prime power p^a, a >= 2
            std::uint32_t p = spf.spf(n);
            std::uint32_t down = n / p;
            double below = (down / p >= 1) ? lam.values[down / p] : 0.0;
            lam.values[n] = lam.values[p] * lam.values[down] - below;
        }
    }
    return lam;
}

void write_tau_csv(const TauTable& tau, const LambdaTable& lambda, std::ostream& os) {
    os << "n,tau,lambda\n";
    char buf[64];
    for (std::uint32_t n = 1; n <= tau.limit; ++n) {
        std::snprintf(buf, sizeof buf, "%.17g", lambda.values[n]);
        os << n << ',' << tau.values[n].str() << ',' << buf << '\n';
    }
}

namespace {

void put_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_varint(std::string& out, const tau_int& v) {
    tau_int mag = abs(v);
    tau_int u = (mag << 1) | (v < 0 ? 1 : 0);
    do {
        auto low = static_cast<std::uint8_t>(u & 0x7f);
        u >>= 7;
        out.push_back(static_cast<char>(low | (u != 0 ? 0x80 : 0x00)));
    } while (u != 0);
}

constexpr char kMagic[4] = {'T', 'A', 'U', '1'};
constexpr std::uint8_t kVersion = 1;

} // namespace

void save_tau_cache(const std::filesystem::path& file, const TauTable& tau, const LambdaTable& lambda) {
    std::string blob;
    blob.reserve(static_cast<std::size_t>(tau.limit) * 18 + 16);
    blob.append(kMagic, 4);
    blob.push_back(static_cast<char>(kVersion));
    put_u64_le(blob, tau.limit);
    for (std::uint32_t n = 1; n <= tau.limit; ++n) {
        put_varint(blob, tau.values[n]);
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof(double));
        std::memcpy(&bits, &lambda.values[n], sizeof bits);
        put_u64_le(blob, bits);
    }
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_tau_cache: cannot open " + file.string());
    os.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!os) throw std::runtime_error("save_tau_cache: short write to " + file.string());
}

std::optional<std::pair<TauTable, LambdaTable>> load_tau_cache(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) return std::nullopt;
    std::string blob((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (blob.size() < 13 || std::memcmp(blob.data(), kMagic, 4) != 0) return std::nullopt;
    if (static_cast<std::uint8_t>(blob[4]) != kVersion) return std::nullopt;

    std::size_t pos = 5;
    auto get_u64 = [&](std::uint64_t& v) {
        if (pos + 8 > blob.size()) throw std::runtime_error("tau cache: truncated");
        v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(blob[pos + i])) << (8 * i);
        pos += 8;
    };
    std::uint64_t n64 = 0;
    get_u64(n64);
    if (n64 < 1 || n64 > kTauHardCap) throw std::runtime_error("tau cache: bad table size");
    const auto N = static_cast<std::uint32_t>(n64);

    TauTable tau;
    tau.limit = N;
    tau.values.assign(static_cast<std::size_t>(N) + 1, tau_int{0});
    LambdaTable lam;
    lam.limit = N;
    lam.values.assign(static_cast<std::size_t>(N) + 1, 0.0);

    for (std::uint32_t n = 1; n <= N; ++n) {
        tau_int u = 0;
        int shift = 0;
        while (true) {
            if (pos >= blob.size()) throw std::runtime_error("tau cache: truncated varint");
            auto byte = static_cast<std::uint8_t>(blob[pos++]);
            u |= tau_int(byte & 0x7f) << shift;
            shift += 7;
            if (!(byte & 0x80)) break;
            if (shift > 512) throw std::runtime_error("tau cache: oversized varint");
        }
        bool neg = static_cast<bool>(u & 1);
        tau_int mag = u >> 1;
        tau.values[n] = neg ? -mag : mag;
        std::uint64_t bits = 0;
        get_u64(bits);
        double d;
        std::memcpy(&d, &bits, sizeof d);
        lam.values[n] = d;
    }
    if (pos != blob.size()) throw std::runtime_error("tau cache: trailing bytes");
    return std::make_pair(std::move(tau), std::move(lam));
}

std::pair<TauTable, LambdaTable> tables_cached(std::uint32_t N, const std::filesystem::path& cache_dir) {
    std::filesystem::path file;
    if (!cache_dir.empty()) {
        file = cache_dir / ("tau_" + std::to_string(N) + ".v" + std::to_string(kVersion) + ".bin");
        if (auto hit = load_tau_cache(file)) {
            if (hit->first.limit == N) return std::move(*hit);
        }
    }
    TauTable tau = tau_exact(N);
    LambdaTable lam = lambda_from_tau(tau);
    if (!cache_dir.empty()) {
        std::filesystem::create_directories(cache_dir);
        save_tau_cache(file, tau, lam);
    }
    return {std::move(tau), std::move(lam)};
}

} // namespace twistlab
