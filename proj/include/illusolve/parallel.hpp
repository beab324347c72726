#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace illusolve {

// Runs fn(chunk_index, begin, end) over [0, total) split into `jobs`
// near-equal contiguous ranges, on `jobs` threads. Results must be merged
// by the caller in chunk order so the outcome is independent of scheduling.
// The lowest-chunk exception, if any, is rethrown on the calling thread.
inline void parallel_chunks(std::size_t total, int jobs,
                            const std::function<void(int, std::size_t, std::size_t)> & fn)
{
    if (jobs < 1)
        jobs = 1;
    if (jobs == 1 || total < 2) {
        fn(0, 0, total);
        return;
    }
    std::size_t n_chunks = std::min<std::size_t>(jobs, total);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(n_chunks);
    threads.reserve(n_chunks);
    std::size_t base = total / n_chunks, extra = total % n_chunks, begin = 0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        std::size_t len = base + (c < extra ? 1 : 0);
        threads.emplace_back(
            [&fn, &errors](int chunk, std::size_t b, std::size_t e) {
                try {
                    fn(chunk, b, e);
                }
                catch (...) {
                    errors[chunk] = std::current_exception();
                }
            },
            static_cast<int>(c), begin, begin + len);
        begin += len;
    }
    for (auto & t : threads)
        t.join();
    for (auto & err : errors)
        if (err)
            std::rethrow_exception(err);
}

} // namespace illusolve
