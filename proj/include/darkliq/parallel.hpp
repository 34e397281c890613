#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace darkliq {

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs f(i) for i in [0, n) on `threads` workers with contiguous blocks.
/// The first exception thrown by any f is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Neumaier-compensated sum, taken in index order.
inline double compensated_sum(const std::vector<double>& v) {
    double sum = 0.0, c = 0.0;
    for (double x : v) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

}  // namespace darkliq
