#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace srzoo {

namespace detail {
inline std::atomic<int>& thread_setting() {
    static std::atomic<int> value{0};
    return value;
}
}  // namespace detail

/// Worker count used by the compute kernels. Resolution order: an explicit
/// set_num_threads() call, then the SRZOO_THREADS environment variable, then
/// the hardware concurrency.
inline int num_threads() {
    int v = detail::thread_setting().load();
    if (v > 0) return v;
    if (const char* env = std::getenv("SRZOO_THREADS")) {
        int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// n <= 0 restores the default resolution.
inline void set_num_threads(int n) { detail::thread_setting().store(std::max(0, n)); }

/// Runs fn(i) for i in [0, count). Work is split into fixed contiguous chunks
/// and each index is computed by exactly one worker, so results never depend
/// on the thread count.
template <class Fn>
void parallel_for(std::int64_t count, Fn&& fn) {
    const std::int64_t workers = std::min<std::int64_t>(num_threads(), count);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t t = 0; t < workers; ++t) {
        const std::int64_t begin = count * t / workers;
        const std::int64_t end = count * (t + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace srzoo
