#include "kt/parallel.hpp"
#include <algorithm>
#include <thread>
#include <vector>

namespace kt {

int hardwareThreads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : (int)std::min(n, 8u);
}

void parallelFor(std::size_t n, const std::function<void(std::size_t, std::size_t)>& f) {
    int p = hardwareThreads();
    if (p <= 1 || n < 32769) {
        f(0, n);
        return;
    }
    std::size_t chunk = (n + p - 1) / p;
    std::vector<std::thread> pool;
    for (int t = 1; t < p; ++t) {
        std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(f, b, e);
    }
    f(0, std::min(chunk, n));
    for (auto& th : pool) th.join();
}

} // namespace kt
