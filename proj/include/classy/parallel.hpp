#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace classy {

/// Run f(0), ..., f(n-1) on up to `threads` workers.  Each index writes
/// only its own slot in whatever the caller collects into, so results are
/// identical to the sequential run regardless of scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F f) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                f(i);
            }
        });
    for (auto& t : pool) t.join();
}

} // namespace classy
