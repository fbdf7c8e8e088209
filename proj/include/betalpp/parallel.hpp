#ifndef BETALPP_PARALLEL_HPP
#define BETALPP_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace betalpp {

/// Default worker count: the machine's available parallelism.
inline unsigned default_threads() noexcept {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : hc;
}

/**
 * Evaluates fn(i) for i in [0, count) and returns the results in index order.
 * Indices are split into contiguous blocks, one per worker, so the output is
 * identical for every thread count. The first exception thrown by any worker
 * is rethrown on the calling thread.
 */
template <typename Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn) {
    using T = decltype(fn(std::size_t{0}));
    std::vector<T> out(count);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t block = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * block;
        const std::size_t hi = std::min(count, lo + block);
        pool.emplace_back([&, t, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace betalpp

#endif // BETALPP_PARALLEL_HPP
