#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace asc {

// Worker cap: ASC_THREADS when set, hardware concurrency otherwise.
inline int worker_count(int jobs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
    if (const char* env = std::getenv("ASC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) cap = v;
    }
    return std::max(1, std::min(cap, jobs));
}

// Static contiguous chunking: worker w handles [begin_w, end_w). The chunk
// assignment is a pure function of (jobs, workers), so results that are
// reduced in worker order are reproducible for a fixed thread cap.
inline void parallel_chunks(int jobs, const std::function<void(int worker, int begin, int end)>& fn) {
    const int workers = worker_count(jobs);
    if (workers == 1) {
        fn(0, 0, jobs);
        return;
    }
    const int chunk = (jobs + workers - 1) / workers;
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(jobs, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&fn, &errors, w, begin, end]() {
            try {
                fn(w, begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace asc
