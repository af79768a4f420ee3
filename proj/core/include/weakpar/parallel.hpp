#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace weakpar {

/// Worker count used by exhaustive loops. Defaults to hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Splits [0, count) into a fixed number of chunks that depends only on
/// `count`, maps each chunk on the worker pool, and folds the chunk results
/// left to right. The result is therefore independent of the thread count.
template <typename T, typename MapChunk, typename Fold>
T parallel_reduce(std::uint64_t count, T init, MapChunk map_chunk, Fold fold) {
    constexpr std::uint64_t kMinChunk = 4096;
    const std::uint64_t chunks = std::clamp<std::uint64_t>(count / kMinChunk, 1, 64);
    const std::uint64_t step = (count + chunks - 1) / chunks;

    std::vector<T> partial(chunks, init);
    const std::size_t workers = std::min<std::size_t>(thread_count(), chunks);
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) {
            partial[c] = map_chunk(std::min(count, c * step), std::min(count, (c + 1) * step));
        }
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::uint64_t c = w; c < chunks; c += workers) {
                        partial[c] = map_chunk(std::min(count, c * step), std::min(count, (c + 1) * step));
                    }
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    T acc = std::move(init);
    for (auto& p : partial) {
        acc = fold(std::move(acc), std::move(p));
    }
    return acc;
}

}  // namespace weakpar
