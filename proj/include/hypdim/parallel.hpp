#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace hypdim {

/// Runs fn(begin, end) over fixed-size chunks of [0, count). Chunk boundaries do not depend on
/// the worker count, so callers that write per-index results get identical output for any N.
template <class Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn, std::size_t chunk = std::size_t{1} << 14) {
    const std::size_t chunks = (count + chunk - 1) / chunk;
    const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
            fn(c * chunk, std::min(count, (c + 1) * chunk));
        }
    };
    if (workers == 1 || chunks <= 1) {
        run();
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, chunks); ++w) pool.emplace_back(run);
}

}  // namespace hypdim
