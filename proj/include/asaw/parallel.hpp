#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace asaw {

namespace detail {
inline int& thread_override() {
    static int n = 0;
    return n;
}
}  // namespace detail

// ASAW_THREADS, else an explicit override, else hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("ASAW_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
    }
    if (detail::thread_override() >= 1) return detail::thread_override();
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

inline void set_thread_count(int n) { detail::thread_override() = n; }

// Runs task(i) for i in [0, n) on a small pool.  Results must be written to
// per-index slots by the caller, so the reduction order never depends on
// scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task, int threads = 0) {
    if (threads <= 0) threads = thread_count();
    threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace asaw
