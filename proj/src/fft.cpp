#include "twistlab/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <omp.h>

#include "twistlab/parallel.hpp"

namespace twistlab::fft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t next_pow2(std::size_t n) {
    std::size_t L = 1;
    while (L < n) L <<= 1;
    return L;
}

} // namespace

void pow2_transform(std::vector<cplx>& a, int sign, bool parallel) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("pow2_transform: length must be a power of two");
    if (n == 1) return;

    int lg = 0;
    while ((std::size_t{1} << lg) < n) ++lg;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < lg; ++b)
            if (i >> b & 1) r |= std::size_t{1} << (lg - 1 - b);
        if (i < r) std::swap(a[i], a[r]);
    }

    // One table of w^j for the full length; level `len` strides through it.
    std::vector<cplx> tw(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        double ang = sign * kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        tw[j] = {std::cos(ang), std::sin(ang)};
    }

    const int threads = worker_count();
    const bool par = parallel && threads > 1 && n >= (1 << 15);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        // Disjoint slot pairs per butterfly: both splits run the identical
        // arithmetic, so the output is schedule-independent.
        if (par && half >= (std::size_t{1} << 13)) {
            for (std::size_t base = 0; base < n; base += len) {
#pragma omp parallel for num_threads(threads) schedule(static)
                for (std::int64_t j = 0; j < static_cast<std::int64_t>(half); ++j) {
                    const cplx u = a[base + j];
                    const cplx v = a[base + j + half] * tw[j * stride];
                    a[base + j] = u + v;
                    a[base + j + half] = u - v;
                }
            }
        } else if (par) {
            const std::int64_t blocks = static_cast<std::int64_t>(n / len);
#pragma omp parallel for num_threads(threads) schedule(static)
            for (std::int64_t blk = 0; blk < blocks; ++blk) {
                const std::size_t base = static_cast<std::size_t>(blk) * len;
                for (std::size_t j = 0; j < half; ++j) {
                    const cplx u = a[base + j];
                    const cplx v = a[base + j + half] * tw[j * stride];
                    a[base + j] = u + v;
                    a[base + j + half] = u - v;
                }
            }
        } else {
            for (std::size_t base = 0; base < n; base += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const cplx u = a[base + j];
                    const cplx v = a[base + j + half] * tw[j * stride];
                    a[base + j] = u + v;
                    a[base + j + half] = u - v;
                }
            }
        }
    }
}

std::vector<cplx> dft(const std::vector<cplx>& a, int sign, bool parallel) {
    const std::size_t n = a.size();
    if (n == 0) return {};
    if (n == 1) return a;
    if ((n & (n - 1)) == 0) {
        std::vector<cplx> out = a;
        pow2_transform(out, sign, parallel);
        return out;
    }

    // Bluestein: t*k = (t^2 + k^2 - (t-k)^2) / 2, so with the chirp
    // c_m = e(sign * pi * i * m^2 / n) the DFT is c_t * (a.c (*) conj(c))_t.
    const std::size_t L = next_pow2(2 * n - 1);
    std::vector<cplx> chirp(n);
    for (std::size_t m = 0; m < n; ++m) {
        // m^2 mod 2n computed in integers; m < n <= ~10^7 so m*m fits u64.
        std::uint64_t r = (static_cast<std::uint64_t>(m) * m) % (2 * n);
        double ang = sign * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
        chirp[m] = {std::cos(ang), std::sin(ang)};
    }

    std::vector<cplx> u(L, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];

    std::vector<cplx> v(L, cplx{0.0, 0.0});
    v[0] = std::conj(chirp[0]);
    for (std::size_t m = 1; m < n; ++m) {
        v[m] = std::conj(chirp[m]);
        v[L - m] = std::conj(chirp[m]);
    }

    pow2_transform(u, -1, parallel);
    pow2_transform(v, -1, parallel);
    const double inv_L = 1.0 / static_cast<double>(L);
    for (std::size_t i = 0; i < L; ++i) u[i] *= v[i] * inv_L;
    pow2_transform(u, +1, parallel);

    std::vector<cplx> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = chirp[t] * u[t];
    return out;
}

std::vector<cplx> dft_direct(const std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    for (std::size_t t = 0; t < n; ++t) {
        cplx s{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            std::uint64_t r = (static_cast<std::uint64_t>(t) * k) % n;
            double ang = sign * kTwoPi * static_cast<double>(r) / static_cast<double>(n);
            s += a[k] * cplx{std::cos(ang), std::sin(ang)};
        }
        out[t] = s;
    }
    return out;
}

} // namespace twistlab::fft
