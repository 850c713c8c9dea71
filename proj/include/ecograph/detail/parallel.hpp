#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ecograph::detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(begin, end, worker) over contiguous blocks of [0, count). Blocks
/// are fixed by (count, workers) so callers can merge per-block results in
/// a deterministic order.
template <typename Fn>
void parallel_blocks(std::size_t count, unsigned threads, Fn&& fn) {
    unsigned workers = std::max(1u, std::min<unsigned>(resolve_threads(threads),
                                                       static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        fn(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = std::min(count, w * chunk);
        std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, begin, end, w] {
            try {
                fn(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace ecograph::detail
