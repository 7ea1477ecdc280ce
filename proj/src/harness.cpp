#include "twistlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "twistlab/analytics.hpp"
#include "twistlab/chargroup.hpp"
#include "twistlab/coefficients.hpp"
#include "twistlab/eulerprod.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/primes.hpp"
#include "twistlab/randmult.hpp"

namespace twistlab {

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::string path;
    std::ostringstream body;
    std::size_t rows = 0;

    explicit CsvWriter(std::string p, const std::string& header) : path(std::move(p)) {
        body << header << '\n';
    }
    template <typename... Parts>
    void row(const Parts&... parts) {
        bool first = true;
        ((body << (first ? "" : ","), first = false, body << parts), ...);
        body << '\n';
        ++rows;
    }
    void flush() const {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open output file " + path);
        const std::string s = body.str();
        os.write(s.data(), static_cast<std::streamsize>(s.size()));
        if (!os) throw std::runtime_error("short write to " + path);
    }
};

std::uint32_t require_prime_modulus(std::uint64_t q) {
    if (q > kModulusCap) throw std::invalid_argument("q exceeds the 10^7+19 modulus cap");
    if (!is_prime_u64(q)) throw std::invalid_argument("q = " + std::to_string(q) + " is not prime");
    return static_cast<std::uint32_t>(q);
}

std::uint32_t resolve_x(const std::string& rule, std::uint32_t q) {
    long long v = 0;
    if (rule == "sqrt")
        v = std::llround(std::floor(std::sqrt(static_cast<double>(q))));
    else if (rule == "q/10")
        v = std::llround(static_cast<double>(q) / 10.0);
    else if (rule == "q-1")
        v = static_cast<long long>(q) - 1;
    else {
        try {
            std::size_t pos = 0;
            v = std::stoll(rule, &pos);
            if (pos != rule.size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("unrecognized x rule '" + rule + "'");
        }
    }
    if (v < 1 || v > q) throw std::invalid_argument("x rule resolves outside [1, q]");
    return static_cast<std::uint32_t>(v);
}

void check_k_values(const std::vector<double>& ks) {
    if (ks.empty()) throw std::invalid_argument("at least one k value is required");
    for (double k : ks)
        if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("k values must lie in [0,1]");
}

LambdaTable lambda_table_for(const ExperimentConfig& cfg, std::uint32_t needed) {
    std::uint32_t N = std::max(cfg.table_limit, needed);
    if (N > kTauHardCap)
        throw std::invalid_argument("requested range needs lambda beyond the exact-table cap 10^6");
    return tables_cached(N, cfg.cache_dir).second;
}

std::string out_or_default(const ExperimentConfig& cfg) {
    return cfg.out_path.empty() ? cfg.subcommand + ".csv" : cfg.out_path;
}

// ---- subcommands -----------------------------------------------------------

int run_tau(const ExperimentConfig& cfg) {
    if (cfg.table_limit < 1 || cfg.table_limit > kTauHardCap)
        throw std::invalid_argument("tau: --limit must be in [1, 10^6]");
    auto [tau, lambda] = tables_cached(cfg.table_limit, cfg.cache_dir);
    CsvWriter csv(out_or_default(cfg), "n,tau,lambda");
    for (std::uint32_t n = 1; n <= tau.limit; ++n) csv.row(n, tau.values[n].str(), g17(lambda.values[n]));
    csv.flush();
    std::printf("tau: N=%u wrote %zu rows to %s\n", tau.limit, csv.rows, csv.path.c_str());
    return 0;
}

int run_moments(const ExperimentConfig& cfg) {
    if (cfg.q_list.size() != 1) throw std::invalid_argument("moments: exactly one --q is required");
    check_k_values(cfg.k_values);
    if (cfg.method != "transform" && cfg.method != "direct")
        throw std::invalid_argument("moments: --method must be transform or direct");
    std::uint32_t q = require_prime_modulus(cfg.q_list[0]);
    std::uint32_t x = resolve_x(cfg.x_rule, q);
    LambdaTable lambda = lambda_table_for(cfg, x);
    CharacterGroup group = build_group(q);
    CharSumVector sums =
        cfg.method == "direct" ? brute_char_sums(group, x, lambda) : all_char_sums(group, x, lambda);
    MomentReport rep = moment_report(sums, cfg.k_values);
    CsvWriter csv(out_or_default(cfg), "q,x,k,moment,bound,ratio");
    for (const auto& e : rep.entries) csv.row(q, x, g17(e.k), g17(e.moment), g17(e.bound), g17(e.ratio));
    csv.flush();
    if (!cfg.sums_out.empty()) {
        CsvWriter dump(cfg.sums_out, "t,re,im");
        for (std::size_t t = 0; t < sums.sums.size(); ++t)
            dump.row(t, g17(sums.sums[t].real()), g17(sums.sums[t].imag()));
        dump.flush();
    }
    std::printf("moments: q=%u x=%u method=%s wrote %zu rows to %s\n", q, x, cfg.method.c_str(), csv.rows,
                csv.path.c_str());
    return 0;
}

int run_ladder(const ExperimentConfig& cfg) {
    if (cfg.q_list.size() < 3) throw std::invalid_argument("ladder: at least three primes are required");
    check_k_values(cfg.k_values);
    std::vector<std::uint32_t> qs;
    for (auto q : cfg.q_list) qs.push_back(require_prime_modulus(q));

    std::uint32_t max_x = 0;
    for (auto q : qs) max_x = std::max(max_x, resolve_x(cfg.x_rule, q));
    LambdaTable lambda = lambda_table_for(cfg, max_x);

    CsvWriter csv(out_or_default(cfg), "q,x,k,moment,bound,ratio,normalized");
    for (auto q : qs) {
        std::uint32_t x = resolve_x(cfg.x_rule, q);
        CharacterGroup group = build_group(q);
        CharSumVector sums = all_char_sums(group, x, lambda);
        for (double k : cfg.k_values) {
            double mom = moment(sums, k);
            double bound = theorem_bound(x, q, k);
            // normalized = moment / x^k; at k = 1/2 this is the mean of
            // |S| over sqrt(x).
            csv.row(q, x, g17(k), g17(mom), g17(bound), g17(mom / bound),
                    g17(mom / std::pow(static_cast<double>(x), k)));
        }
    }
    csv.flush();
    std::printf("ladder: %zu primes x-rule=%s wrote %zu rows to %s\n", qs.size(), cfg.x_rule.c_str(),
                csv.rows, csv.path.c_str());
    return 0;
}

int run_random(const ExperimentConfig& cfg) {
    check_k_values(cfg.k_values);
    if (cfg.trials < 2) throw std::invalid_argument("random: --trials must be >= 2");
    LambdaTable lambda = lambda_table_for(cfg, cfg.x);
    CsvWriter csv(out_or_default(cfg), "x,k,trials,seed,value,std_error");
    for (double k : cfg.k_values) {
        MCEstimate est = mc_moment(cfg.x, k, cfg.trials, cfg.seed, lambda);
        csv.row(cfg.x, g17(k), cfg.trials, cfg.seed, g17(est.value), g17(est.std_error));
    }
    csv.flush();
    std::printf("random: x=%u trials=%llu seed=%llu wrote %zu rows to %s\n", cfg.x,
                static_cast<unsigned long long>(cfg.trials), static_cast<unsigned long long>(cfg.seed),
                csv.rows, csv.path.c_str());
    return 0;
}

int run_euler_identity(const ExperimentConfig& cfg) {
    if (cfg.trials < 2) throw std::invalid_argument("euler-identity: --trials must be >= 2");
    const std::string kind = cfg.kind.empty() ? "second-moment" : cfg.kind;
    CsvWriter csv(out_or_default(cfg), "P,k,estimate,std_error,closed_form");
    if (kind == "second-moment") {
        std::uint32_t maxp = 0;
        for (auto P : cfg.p_list) maxp = std::max(maxp, P);
        LambdaTable lambda = lambda_table_for(cfg, maxp);
        for (auto P : cfg.p_list) {
            IdentityCheck chk = second_moment_identity(P, cfg.t, cfg.trials, cfg.seed, lambda);
            csv.row(P, g17(1.0), g17(chk.mc.value), g17(chk.mc.std_error), g17(chk.closed_form));
        }
    } else if (kind == "expectation") {
        LambdaTable lambda = lambda_table_for(cfg, static_cast<std::uint32_t>(std::ceil(cfg.y)));
        MomentExponents me{cfg.a, cfg.b, cfg.sigma1, cfg.sigma2, cfg.t1, cfg.t2};
        IdentityCheck chk = mc_expectation_identity(cfg.z, cfg.y, me, cfg.trials, cfg.seed, lambda);
        csv.row(static_cast<std::uint64_t>(cfg.y), g17(cfg.a), g17(chk.mc.value), g17(chk.mc.std_error),
                g17(chk.closed_form));
    } else {
        throw std::invalid_argument("euler-identity: --kind must be second-moment or expectation");
    }
    csv.flush();
    std::printf("euler-identity: kind=%s trials=%llu wrote %zu rows to %s\n", kind.c_str(),
                static_cast<unsigned long long>(cfg.trials), csv.rows, csv.path.c_str());
    return 0;
}

int run_euler_grid(const ExperimentConfig& cfg) {
    if (cfg.P < 100) throw std::invalid_argument("euler-grid: --P must be >= 100");
    LambdaTable lambda = lambda_table_for(cfg, cfg.P);
    PhaseAssignment phases = sample_phases(cfg.P, cfg.seed);
    EulerEvaluator ev = make_euler_evaluator(cfg.P, lambda, phases);
    CsvWriter csv(out_or_default(cfg), "P,j,re,im");
    for (const auto& [j, F] : grid_values(ev)) csv.row(cfg.P, j, g17(F.real()), g17(F.imag()));
    csv.flush();
    std::printf("euler-grid: P=%u seed=%llu wrote %zu rows to %s\n", cfg.P,
                static_cast<unsigned long long>(cfg.seed), csv.rows, csv.path.c_str());
    return 0;
}

std::vector<std::uint32_t> default_checkpoints(std::uint32_t limit) {
    std::vector<std::uint32_t> xs;
    for (std::uint32_t x = 1000; x <= limit; x *= 10) xs.push_back(x);
    if (xs.empty()) xs.push_back(limit);
    return xs;
}

void emit_trace(CsvWriter& csv, const SumTrace& trace) {
    for (const auto& [x, v] : trace.checkpoints) csv.row(g17(x), g17(v), trace.reference);
}

int run_mertens(const ExperimentConfig& cfg) {
    auto xs = cfg.checkpoints.empty() ? default_checkpoints(cfg.table_limit) : cfg.checkpoints;
    std::uint32_t maxx = *std::max_element(xs.begin(), xs.end());
    LambdaTable lambda = lambda_table_for(cfg, maxx);
    CsvWriter csv(out_or_default(cfg), "x,value,reference");
    const std::string kind = cfg.kind.empty() ? "both" : cfg.kind;
    if (kind != "both" && kind != "lambda" && kind != "classic")
        throw std::invalid_argument("mertens: --kind must be lambda, classic or both");
    if (kind != "classic")
        emit_trace(csv, trace_over(xs, [&](std::uint32_t x) { return mertens_lambda(x, lambda); },
                                   "sum lambda(p)^2/p ~ loglog x + b2"));
    if (kind != "lambda")
        emit_trace(csv, trace_over(xs, [](std::uint32_t x) { return mertens_classic(x); },
                                   "sum 1/p ~ loglog x + b1"));
    csv.flush();
    std::printf("mertens: %zu checkpoints wrote %zu rows to %s\n", xs.size(), csv.rows, csv.path.c_str());
    return 0;
}

int run_rankin(const ExperimentConfig& cfg) {
    auto xs = cfg.checkpoints.empty() ? default_checkpoints(cfg.table_limit) : cfg.checkpoints;
    std::uint32_t maxx = *std::max_element(xs.begin(), xs.end());
    LambdaTable lambda = lambda_table_for(cfg, maxx);
    CsvWriter csv(out_or_default(cfg), "x,value,reference");
    emit_trace(csv, trace_over(xs, [&](std::uint32_t x) { return rankin_partial(x, lambda) / x; },
                               "sum lambda(n)^2 / x ~ L(1,sym^2 f)/zeta(2)"));
    csv.flush();
    std::printf("rankin: %zu checkpoints wrote %zu rows to %s\n", xs.size(), csv.rows, csv.path.c_str());
    return 0;
}

int run_smooth(const ExperimentConfig& cfg) {
    const std::string kind = cfg.kind.empty() ? "restricted" : cfg.kind;
    CsvWriter csv(out_or_default(cfg), "x,value,reference");
    if (kind == "restricted") {
        auto xs = cfg.checkpoints.empty() ? default_checkpoints(cfg.table_limit) : cfg.checkpoints;
        std::uint32_t maxx = *std::max_element(xs.begin(), xs.end());
        LambdaTable lambda = lambda_table_for(cfg, maxx);
        SumTrace raw = trace_over(xs, [&](std::uint32_t x) { return smooth_restricted_sum(x, lambda); },
                                  "smooth-restricted sum");
        SumTrace scaled;
        scaled.reference = "scaled: sum * loglog x / x";
        for (const auto& [x, v] : raw.checkpoints)
            scaled.checkpoints.emplace_back(x, v * std::log(std::log(x)) / x);
        emit_trace(csv, raw);
        emit_trace(csv, scaled);
    } else if (kind == "series") {
        std::uint32_t maxp = 0;
        for (auto P : cfg.p_list) maxp = std::max(maxp, P);
        LambdaTable lambda = lambda_table_for(cfg, maxp);
        for (auto P : cfg.p_list) {
            double s = smooth_series(P, lambda);
            csv.row(P, g17(s), "smooth series (Euler-factor form)");
            csv.row(P, g17(s / std::log(static_cast<double>(P))), "scaled: series / log P");
        }
    } else if (kind == "rough") {
        if (cfg.u <= 0.0) throw std::invalid_argument("smooth --kind rough: --u is required");
        LambdaTable lambda = lambda_table_for(cfg, static_cast<std::uint32_t>(std::floor(cfg.u)));
        double s = rough_sum(cfg.x, cfg.u, cfg.P, lambda);
        csv.row(g17(cfg.u), g17(s), "rough sum");
        csv.row(g17(cfg.u), g17(s * std::log(static_cast<double>(cfg.P)) / cfg.u), "scaled: sum * log P / u");
    } else {
        throw std::invalid_argument("smooth: --kind must be restricted, series or rough");
    }
    csv.flush();
    std::printf("smooth: kind=%s wrote %zu rows to %s\n", kind.c_str(), csv.rows, csv.path.c_str());
    return 0;
}

int run_parseval(const ExperimentConfig& cfg) {
    LambdaTable lambda = lambda_table_for(cfg, std::max(cfg.cutoff, 100u));
    auto [lhs, rhs] = parseval_check(cfg.cutoff, cfg.sigma, lambda);
    CsvWriter csv(out_or_default(cfg), "cutoff,sigma,lhs,rhs,rel_diff");
    csv.row(cfg.cutoff, g17(cfg.sigma), g17(lhs), g17(rhs), g17(std::abs(lhs - rhs) / std::abs(rhs)));
    csv.flush();
    std::printf("parseval: cutoff=%u sigma=%s wrote %zu rows to %s\n", cfg.cutoff, g17(cfg.sigma).c_str(),
                csv.rows, csv.path.c_str());
    return 0;
}

} // namespace

std::string default_cache_dir() {
    if (const char* env = std::getenv("TWISTLAB_CACHE_DIR")) return env;
    return ".twistlab-cache";
}

int run(const ExperimentConfig& cfg) {
    set_worker_count(cfg.threads);
    if (cfg.subcommand == "tau") return run_tau(cfg);
    if (cfg.subcommand == "moments") return run_moments(cfg);
    if (cfg.subcommand == "ladder") return run_ladder(cfg);
    if (cfg.subcommand == "random") return run_random(cfg);
    if (cfg.subcommand == "euler-identity") return run_euler_identity(cfg);
    if (cfg.subcommand == "euler-grid") return run_euler_grid(cfg);
    if (cfg.subcommand == "mertens") return run_mertens(cfg);
    if (cfg.subcommand == "rankin") return run_rankin(cfg);
    if (cfg.subcommand == "smooth") return run_smooth(cfg);
    if (cfg.subcommand == "parseval") return run_parseval(cfg);
    throw std::invalid_argument("unknown subcommand '" + cfg.subcommand + "'");
}

int run_cli(int argc, const char* const* argv) {
    ExperimentConfig cfg;
    cfg.cache_dir = default_cache_dir();
    bool no_cache = false;

    CLI::App app{"twistlab: twisted Hecke eigenvalue sums, their moments, and random models"};
    app.set_config("--config", "", "read defaults from a `key = value` file (flags take precedence)");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--q", cfg.q_list, "prime modulus (repeat or comma-separate for a ladder)")
        ->delimiter(',');
    app.add_option("--x", cfg.x_rule, "x rule: sqrt, q/10, q-1 or an integer");
    app.add_option("--k", cfg.k_values, "moment indices in [0,1]")->delimiter(',');
    app.add_option("--trials", cfg.trials, "Monte Carlo trials");
    app.add_option("--seed", cfg.seed, "base seed for all phase draws");
    app.add_option("--limit", cfg.table_limit, "coefficient table size (floor)");
    app.add_option("--out", cfg.out_path, "output CSV path");
    app.add_option("--dump-sums", cfg.sums_out, "moments: also write the raw sum vector as t,re,im");
    app.add_option("--method", cfg.method, "moments evaluation path: transform | direct");
    app.add_option("--threads", cfg.threads, "worker count (0 = machine parallelism)");
    app.add_option("--cache-dir", cfg.cache_dir, "tau binary cache directory");
    app.add_flag("--no-cache", no_cache, "disable the tau binary cache");
    app.add_option("--rx", cfg.x, "sum length x for the random model");
    app.add_option("--P", cfg.p_list, "Euler product cutoff(s)")->delimiter(',');
    app.add_option("--z", cfg.z, "lower prime bound (expectation identity)");
    app.add_option("--y", cfg.y, "upper prime bound (expectation identity)");
    app.add_option("--a", cfg.a, "exponent a");
    app.add_option("--b", cfg.b, "exponent b");
    app.add_option("--sigma1", cfg.sigma1, "offset sigma_1");
    app.add_option("--sigma2", cfg.sigma2, "offset sigma_2");
    app.add_option("--t1", cfg.t1, "height t_1");
    app.add_option("--t2", cfg.t2, "height t_2");
    app.add_option("--t", cfg.t, "height t (second-moment identity)");
    app.add_option("--kind", cfg.kind, "sub-mode where a subcommand has several");
    app.add_option("--checkpoints", cfg.checkpoints, "x checkpoints for trace subcommands")->delimiter(',');
    app.add_option("--cutoff", cfg.cutoff, "Dirichlet polynomial cutoff (parseval)");
    app.add_option("--sigma", cfg.sigma, "abscissa sigma (parseval)");
    app.add_option("--u", cfg.u, "upper bound u (rough sums)");

    for (const char* name : {"tau", "moments", "ladder", "random", "euler-identity", "euler-grid",
                             "mertens", "rankin", "smooth", "parseval"})
        app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (no_cache) cfg.cache_dir.clear();
    if (!cfg.p_list.empty()) cfg.P = cfg.p_list.front();

    try {
        return run(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace twistlab
