#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nfedof {

// Runs fn(i) for i in [0, n). Items are dealt round-robin so the mapping of
// work to threads is fixed; results must be written to per-index slots.
// The exception from the lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    if (n == 0) return;
    const std::size_t t = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (t == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += t) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace nfedof
