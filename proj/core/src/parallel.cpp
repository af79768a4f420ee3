#include "weakpar/parallel.hpp"

#include <atomic>

namespace weakpar {

namespace {

std::atomic<std::size_t>& configured_threads() {
    static std::atomic<std::size_t> n{std::max<std::size_t>(1, std::thread::hardware_concurrency())};
    return n;
}

}  // namespace

std::size_t thread_count() { return configured_threads().load(std::memory_order_relaxed); }

void set_thread_count(std::size_t n) { configured_threads().store(std::max<std::size_t>(1, n)); }

}  // namespace weakpar
