#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fhks {

/// Calls body(i) for i in [0, count) on up to `threads` workers. Items are
/// independent, so results written by index do not depend on the schedule.
/// The first exception (by index) is rethrown after all workers finish.
template <class Body>
void parallel_for(std::size_t count, int threads, Body body) {
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace fhks
