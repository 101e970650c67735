#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace robcred {

// Runs f(i) for i in [0,n) across hardware threads. Callers write results to
// disjoint, preallocated slots indexed by i, so the outcome is identical for
// any worker count.
template <class F>
void parallel_for(std::size_t n, F f) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(hw, n == 0 ? 1 : n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                f(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace robcred
