// detail/parallel.hpp
// Index-range fan-out over std::thread. Callers reduce the per-chunk results
// themselves, in chunk order, so output never depends on scheduling.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace entropic::detail {

/// Calls fn(chunk, begin, end) for `jobs` contiguous chunks of [0, count).
template <class Fn>
void parallel_chunks(std::size_t count, std::size_t jobs, Fn&& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count == 0 ? 1 : count));
    const std::size_t chunk = (count + jobs - 1) / jobs;
    if (jobs == 1) {
        fn(std::size_t{0}, std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(jobs);
    threads.reserve(jobs);
    for (std::size_t c = 0; c < jobs; ++c) {
        const std::size_t b = std::min(count, c * chunk);
        const std::size_t e = std::min(count, b + chunk);
        threads.emplace_back([&, c, b, e] {
            try {
                fn(c, b, e);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

} // namespace entropic::detail
