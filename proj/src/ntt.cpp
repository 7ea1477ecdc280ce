#include "twistlab/ntt.hpp"

#include <stdexcept>

#include <omp.h>

#include "twistlab/parallel.hpp"

namespace twistlab::ntt {

Montgomery::Montgomery(std::uint64_t p) : p_(p) {
    if (p < 3 || (p & 1) == 0) throw std::invalid_argument("Montgomery: modulus must be odd and >= 3");
    // Newton iteration doubles the number of valid low bits each round.
    std::uint64_t inv = p;
    for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
    ninv_ = ~inv + 1; // -p^{-1} mod 2^64
    // R^2 mod p with R = 2^64; p is an odd prime so 2^128 mod p != 0.
    r2_ = static_cast<std::uint64_t>((~static_cast<unsigned __int128>(0)) % p + 1);
}

std::uint64_t Montgomery::pow(std::uint64_t base, std::uint64_t e) const {
    std::uint64_t acc = 1;
    std::uint64_t b = base % p_;
    std::uint64_t b_mont = to_mont(b);
    while (e) {
        if (e & 1) acc = mul(acc, b_mont); // plain * mont -> plain
        b_mont = mul(b_mont, b_mont);      // square stays in mont domain
        e >>= 1;
    }
    return acc;
}

Transformer::Transformer(Prime prime, std::size_t length) : mg_(prime.value), n_(length) {
    if (length < 2 || (length & (length - 1)) != 0)
        throw std::invalid_argument("Transformer: length must be a power of two >= 2");
    if (length > (std::size_t{1} << kMaxLog2Length))
        throw std::invalid_argument("Transformer: length exceeds the 2-adic capacity of the prime set");

    const std::uint64_t p = prime.value;
    std::uint64_t w = mg_.pow(prime.generator, (p - 1) / length);
    // Exact order check: a generator guarantees it, but the transform is
    // silently wrong if the constant table ever regresses.
    std::uint64_t half = mg_.pow(w, length / 2);
    if (half != p - 1) throw std::logic_error("Transformer: root of unity has wrong order");
    std::uint64_t winv = mg_.pow(w, p - 2);

    fw_.resize(length / 2);
    bw_.resize(length / 2);
    std::uint64_t fj = 1, bj = 1;
    std::uint64_t w_mont = mg_.to_mont(w), winv_mont = mg_.to_mont(winv);
    for (std::size_t j = 0; j < length / 2; ++j) {
        fw_[j] = mg_.to_mont(fj);
        bw_[j] = mg_.to_mont(bj);
        fj = mg_.mul(fj, w_mont);
        bj = mg_.mul(bj, winv_mont);
    }

    bitrev_.resize(length);
    int lg = 0;
    while ((std::size_t{1} << lg) < length) ++lg;
    for (std::size_t i = 0; i < length; ++i) {
        std::uint32_t r = 0;
        for (int b = 0; b < lg; ++b)
            if (i >> b & 1) r |= 1u << (lg - 1 - b);
        bitrev_[i] = r;
    }

    n_inv_mont_ = mg_.to_mont(mg_.pow(length % p, p - 2));
}

void Transformer::run(std::uint64_t* a, const std::vector<std::uint64_t>& twiddle, bool parallel) const {
    const std::int64_t n = static_cast<std::int64_t>(n_);
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t r = bitrev_[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    const int threads = worker_count();
    const bool par = parallel && threads > 1 && n_ >= (1 << 15);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n_ / len;
        // Butterflies touch disjoint slot pairs, so either split below runs
        // the identical arithmetic and the schedule cannot change the result.
        if (par && half >= (std::size_t{1} << 13)) {
            // few wide blocks: split the inner j range
            for (std::size_t base = 0; base < n_; base += len) {
#pragma omp parallel for num_threads(threads) schedule(static)
                for (std::int64_t j = 0; j < static_cast<std::int64_t>(half); ++j) {
                    const std::uint64_t u = a[base + j];
                    const std::uint64_t v = mg_.mul(a[base + j + half], twiddle[j * stride]);
                    a[base + j] = mg_.add(u, v);
                    a[base + j + half] = mg_.sub(u, v);
                }
            }
        } else if (par) {
            // many narrow blocks: split across blocks
            const std::int64_t blocks = static_cast<std::int64_t>(n_ / len);
#pragma omp parallel for num_threads(threads) schedule(static)
            for (std::int64_t blk = 0; blk < blocks; ++blk) {
                const std::size_t base = static_cast<std::size_t>(blk) * len;
                for (std::size_t j = 0; j < half; ++j) {
                    const std::uint64_t u = a[base + j];
                    const std::uint64_t v = mg_.mul(a[base + j + half], twiddle[j * stride]);
                    a[base + j] = mg_.add(u, v);
                    a[base + j + half] = mg_.sub(u, v);
                }
            }
        } else {
            for (std::size_t base = 0; base < n_; base += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const std::uint64_t u = a[base + j];
                    const std::uint64_t v = mg_.mul(a[base + j + half], twiddle[j * stride]);
                    a[base + j] = mg_.add(u, v);
                    a[base + j + half] = mg_.sub(u, v);
                }
            }
        }
    }
}

void Transformer::forward(std::uint64_t* a, bool parallel) const { run(a, fw_, parallel); }

void Transformer::inverse(std::uint64_t* a, bool parallel) const {
    run(a, bw_, parallel);
    const std::int64_t n = static_cast<std::int64_t>(n_);
    const int threads = worker_count();
#pragma omp parallel for num_threads(threads) schedule(static) if (parallel && threads > 1 && n >= (1 << 15))
    for (std::int64_t i = 0; i < n; ++i) a[i] = mg_.mul(a[i], n_inv_mont_);
}

} // namespace twistlab::ntt
