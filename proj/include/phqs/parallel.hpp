#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace phqs {

// Worker count: explicit request > PHQS_THREADS env > hardware concurrency.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PHQS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return unsigned(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Splits [0, n) into `threads` contiguous chunks and runs fn(t, lo, hi) on
// each. Exceptions from workers are rethrown on the calling thread.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n == 0) {
        fn(0u, std::size_t{0}, n);
        return;
    }
    const std::size_t per = n / threads;
    const std::size_t extra = n % threads;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    std::size_t lo = 0;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t hi = lo + per + (t < extra ? 1 : 0);
        pool.emplace_back([&, t, lo, hi] {
            try {
                fn(t, lo, hi);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
        lo = hi;
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace phqs
