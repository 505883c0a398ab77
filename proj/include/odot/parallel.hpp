#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace odot {

// Session-wide worker count; results are always merged in index order, so the
// output is byte-identical for every setting.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n) and returns the results in index order.
template <class T>
std::vector<T> parallel_indexed(size_t n, const std::function<T(size_t)>& fn) {
    std::vector<T> out(n);
    int workers = thread_count();
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i)
            out[i] = fn(i);
        return out;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    auto work = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            out[i] = fn(i);
        }
    };
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    return out;
}

}  // namespace odot
