#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace twistlab {

// One fully resolved experiment.  run() executes exactly one subcommand,
// writes its CSV, prints a one-line summary and returns 0; contract
// violations surface as std::invalid_argument (exit 2 at the CLI), anything
// else as a runtime failure (exit 1).
struct ExperimentConfig {
    std::string subcommand;

    std::vector<std::uint64_t> q_list; // modulus, or the ladder for `ladder`
    std::string x_rule = "sqrt";       // "sqrt" | "q/10" | "q-1" | integer
    std::vector<double> k_values{0.5, 1.0};
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::uint32_t table_limit = 100000;
    std::string out_path;              // empty -> "<subcommand>.csv"
    std::string sums_out;              // moments: optional `t,re,im` dump of the sum vector
    std::string method = "transform";  // transform | direct
    int threads = 0;                   // 0 = machine parallelism
    std::string cache_dir;             // empty disables the tau cache

    std::uint32_t x = 100;             // randmult x
    std::vector<std::uint32_t> p_list{100, 1000};
    std::uint32_t P = 1000;
    double z = 500.0, y = 10000.0;
    double a = 1.0, b = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0, t1 = 0.0, t2 = 0.0;
    double t = 0.0;
    std::string kind;                  // sub-mode (euler-identity, smooth, mertens)

    std::vector<std::uint32_t> checkpoints;
    std::uint32_t cutoff = 20;
    double sigma = 0.5;
    double u = 0.0;
};

int run(const ExperimentConfig& config);

// Flag parsing (plus an optional `key = value` config file with flags taking
// precedence) mapped to exit codes: 0 success, 2 invalid config, 1 runtime
// failure.
int run_cli(int argc, const char* const* argv);

// Default cache directory: $TWISTLAB_CACHE_DIR if set, else .twistlab-cache.
std::string default_cache_dir();

} // namespace twistlab
