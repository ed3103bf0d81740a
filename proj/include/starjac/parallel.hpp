#ifndef STARJAC_PARALLEL_HPP
#define STARJAC_PARALLEL_HPP

#include <atomic>
#include <thread>
#include <vector>

namespace starjac {

// Work-stealing-free parallel loop: each index is computed independently and
// written to its own slot, so results are bit-identical for any job count.
template <class F>
inline void parallel_for(long n, int jobs, F&& f) {
    if (jobs <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long> next{0};
    auto worker = [&] {
        while (true) {
            long i = next.fetch_add(1);
            if (i >= n) break;
            f(i);
        }
    };
    std::vector<std::thread> pool;
    int k = std::min<long>(jobs, n);
    for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace starjac

#endif
