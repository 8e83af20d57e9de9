#include "decoh/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace decoh {

namespace {
std::atomic<int> g_workers{1};
}

void set_workers(int n) { g_workers.store(std::max(1, n)); }
int workers() { return g_workers.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers()), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t lo = n * k / w, hi = n * (k + 1) / w;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace decoh
