#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scramble {

/// Calls fn(i) for i in [0, n) on up to `threads` workers pulling indices from a
/// shared counter. Each index must write only its own output slot; results are
/// then independent of the thread count. The first exception thrown by any
/// call is rethrown after all workers have joined.
template<class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn &&fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if(threads == 1) {
        for(std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr       failure;
    std::mutex               failure_mutex;
    auto                     worker = [&] {
        for(std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch(...) {
                std::lock_guard lock(failure_mutex);
                if(!failure) failure = std::current_exception();
                next.store(n);
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for(unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    }
    if(failure) std::rethrow_exception(failure);
}

} // namespace scramble
