#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace yspde {

/// Parallel loop over [0, count) with per-index work writing into caller
/// owned slots; reductions stay in index order so results do not depend on
/// scheduling.  threads == 0 picks the hardware concurrency, 1 runs inline.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace yspde
