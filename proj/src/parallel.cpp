#include "twistlab/parallel.hpp"

#include <atomic>

#include <omp.h>

namespace twistlab {

namespace {
std::atomic<int> g_workers{0};
}

int worker_count() {
    int n = g_workers.load(std::memory_order_relaxed);
    return n > 0 ? n : omp_get_max_threads();
}

void set_worker_count(int n) { g_workers.store(n > 0 ? n : 0, std::memory_order_relaxed); }

} // namespace twistlab
