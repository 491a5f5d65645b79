#pragma once

#include <cstdint>
#include <functional>

namespace avgq {

// Process-wide cap on worker threads used by the parallel loops below. Results
// never depend on it; 1 runs everything on the calling thread.
int default_threads();
void set_default_threads(int threads);

// Splits [begin, end) into contiguous chunks and runs body(lo, hi) on each,
// one chunk per worker. threads <= 0 means default_threads().
void parallel_for(std::uint64_t begin, std::uint64_t end, int threads,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body);

}  // namespace avgq
