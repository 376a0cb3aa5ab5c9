#ifndef SPINZ_THREADS_HPP
#define SPINZ_THREADS_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace spinz {

// Worker count: explicit flag wins, then SPINZ_THREADS, then 1.
inline int resolve_thread_count(int flag_value = 0) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("SPINZ_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

// Runs fn(chunk_index) for chunk_index in [0, num_chunks). The chunk layout
// is fixed by the caller and does not depend on the thread count, so callers
// that reduce chunk results in index order get bit-identical totals for any
// number of workers.
inline void parallel_chunks(int num_chunks, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || num_chunks <= 1) {
        for (int i = 0; i < num_chunks; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    int workers = std::min(threads, num_chunks);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= num_chunks) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace spinz

#endif
