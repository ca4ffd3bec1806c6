#pragma once

#include <algorithm>
#include <chrono>
#include <mutex>
#include <vector>

#include "srzoo/executor.hpp"

namespace srzoo {

struct TimingResult {
    /// Average seconds per image for each trial.
    std::vector<double> trials;
    double best = 0.0;
    std::size_t images = 0;
};

namespace detail {
inline std::mutex& measurement_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Runs `run(i)` over images 0..count-1 once per trial, preceded in every
/// trial by one untimed warm-up call on image 0. Only one measurement may run
/// per process at a time; a concurrent call fails with ErrorCode::busy.
template <class Fn>
TimingResult time_trials(std::size_t count, Fn&& run, int trials = 3) {
    if (count == 0) fail(ErrorCode::invalid_argument, "timing: empty image set");
    if (trials < 1) fail(ErrorCode::invalid_argument, "timing: need at least one trial");
    std::unique_lock guard(detail::measurement_mutex(), std::try_to_lock);
    if (!guard.owns_lock()) fail(ErrorCode::busy, "timing: another measurement is in progress");
    TimingResult r;
    r.images = count;
    for (int t = 0; t < trials; ++t) {
        run(std::size_t{0});
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < count; ++i) run(i);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        r.trials.push_back(elapsed.count() / double(count));
    }
    r.best = *std::min_element(r.trials.begin(), r.trials.end());
    return r;
}

/// Best-of-N average forward time per image.
inline TimingResult time_model(const Graph& g, const WeightStore& store, const std::vector<Tensor>& images,
                               int trials = 3) {
    check_store(g, store);
    return time_trials(images.size(), [&](std::size_t i) { (void)forward(g, store, images[i]); }, trials);
}

}  // namespace srzoo
