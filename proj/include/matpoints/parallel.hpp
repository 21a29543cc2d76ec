#ifndef MATPOINTS_PARALLEL_HPP
#define MATPOINTS_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace matpoints {

/// Apply fn(i) for i in [0, count). Each index owns its output slot, so the
/// result is independent of the thread count.
template <typename Fn>
inline void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace matpoints

#endif
