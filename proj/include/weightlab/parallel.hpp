#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace weightlab {

/// Worker count: hardware concurrency, capped by WEIGHTLAB_THREADS when set.
inline unsigned thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WEIGHTLAB_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (...) {
        }
    }
    return n;
}

/// Splits [0, n) into contiguous chunks and runs body(begin, end, chunk) on
/// worker threads. Callers reduce per-chunk results in chunk order, so the
/// outcome does not depend on scheduling.
template <typename Body>
std::size_t parallel_chunks(std::size_t n, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(1, n / 64));
    if (workers <= 1) {
        body(std::size_t{0}, n, std::size_t{0});
        return 1;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * step);
        const std::size_t end = std::min(n, begin + step);
        pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
    }
    for (auto& t : pool) t.join();
    return workers;
}

/// Exact max-reduction over per-index values produced in parallel.
template <typename Value>
double parallel_max(std::size_t n, Value&& value_of_range) {
    std::vector<double> partial(std::max<unsigned>(1, thread_count()), 0.0);
    const std::size_t used = parallel_chunks(n, [&](std::size_t b, std::size_t e, std::size_t chunk) {
        partial[chunk] = value_of_range(b, e);
    });
    return *std::max_element(partial.begin(), partial.begin() + static_cast<std::ptrdiff_t>(used));
}

}  // namespace weightlab
