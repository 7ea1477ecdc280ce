#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace twistlab {

using tau_int = boost::multiprecision::cpp_int;

// Sparse expansion of prod (1-q^n)^3 = sum_m (-1)^m (2m+1) q^{m(m+1)/2}
// (Jacobi), truncated at a given exponent.  The eighth power of this series
// is the coefficient generating function of the weight-12 cusp form.
struct EtaCubeSeries {
    std::int64_t limit = 0;
    // (exponent, coefficient), exponents strictly increasing
    std::vector<std::pair<std::int64_t, std::int64_t>> terms;
};

// Terms with exponent m(m+1)/2 <= limit; limit >= 0 (the m = 0 term always
// exists), negative limits are rejected.
EtaCubeSeries expand_eta_cube(std::int64_t limit);

inline constexpr std::uint32_t kTauHardCap = 1'000'000;

struct TauTable {
    std::uint32_t limit = 0;
    std::vector<tau_int> values; // values[n] = tau(n), slot 0 unused

    const tau_int& tau(std::uint32_t n) const { return values[n]; }
};

// Exact tau(1..N) as the coefficients of the eighth power of the eta-cube
// series, computed by three dense squarings over the five NTT primes with
// CRT recombination.  1 <= N <= kTauHardCap.
TauTable tau_exact(std::uint32_t N);

struct LambdaTable {
    std::uint32_t limit = 0;
    int weight = 12;
    std::vector<double> values; // values[n] = lambda(n), slot 0 unused

    double operator()(std::uint32_t n) const { return values[n]; }
};

// lambda(n) = tau(n) / n^{5.5}
LambdaTable lambda_from_tau(const TauTable& tau);

// Extends prime values to all n <= N with a linear sieve: coprime
// multiplicativity plus lambda(p^{a+1}) = lambda(p) lambda(p^a) - lambda(p^{a-1}).
LambdaTable lambda_extend_hecke(const std::unordered_map<std::uint32_t, double>& prime_values,
                                std::uint32_t N);

// CSV export: header `n,tau,lambda`, tau in decimal, lambda with 17
// significant digits.
void write_tau_csv(const TauTable& tau, const LambdaTable& lambda, std::ostream& os);

// Binary cache.  Layout: magic `TAU1`, one version byte, little-endian 8-byte
// N, then per entry a signed-magnitude varint for tau followed by the 8
// little-endian bytes of the IEEE-754 lambda.
void save_tau_cache(const std::filesystem::path& file, const TauTable& tau, const LambdaTable& lambda);
// nullopt when the file is absent or carries a different version/N; throws
// on a malformed payload.
std::optional<std::pair<TauTable, LambdaTable>> load_tau_cache(const std::filesystem::path& file);

// Cache-aware table construction; `cache_dir` empty disables caching.
std::pair<TauTable, LambdaTable> tables_cached(std::uint32_t N, const std::filesystem::path& cache_dir);

} // namespace twistlab
