#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

namespace gsel {

// Resolve a worker-count request: 0 means "use the hardware".
inline std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Run fn(lo, hi) over a partition of [0, count) into contiguous chunks, one
// chunk per worker. Results must be written to per-index slots so that the
// partition is never observable and any worker count gives identical
// output; fn may keep per-chunk scratch state across its range.
template <class Fn>
void parallel_for_chunks(std::size_t count, std::size_t nthreads, Fn&& fn) {
    nthreads = resolve_threads(nthreads);
    if (nthreads <= 1 || count <= 1) {
        if (count > 0) fn(std::size_t{0}, count);
        return;
    }
    if (nthreads > count) nthreads = count;
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    const std::size_t chunk = (count + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &fn] { fn(lo, hi); });
    }
    for (auto& w : workers) w.join();
}

// Run fn(i) for i in [0, count) across nthreads workers.
template <class Fn>
void parallel_for(std::size_t count, std::size_t nthreads, Fn&& fn) {
    parallel_for_chunks(count, nthreads, [&fn](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
}

}  // namespace gsel
