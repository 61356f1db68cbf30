// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace tubal {

/// Runs fn(begin, end) over a static partition of [0, count) on `threads`
/// workers (caller thread included). fn must not touch shared mutable state;
/// reductions belong in per-chunk slots merged by the caller.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
    if (count <= 0) return;
    const std::int64_t nchunks = std::clamp<std::int64_t>(threads, 1, count);
    if (nchunks == 1) {
        fn(std::int64_t{0}, count);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(nchunks - 1));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nchunks));
    const std::int64_t base = count / nchunks;
    const std::int64_t rem = count % nchunks;
    std::int64_t begin = 0;
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::int64_t end = begin + base + (c < rem ? 1 : 0);
        auto task = [&fn, &errors, c, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(c)] = std::current_exception();
            }
        };
        if (c + 1 < nchunks)
            workers.emplace_back(task);
        else
            task();  // last chunk on the calling thread
        begin = end;
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace tubal
