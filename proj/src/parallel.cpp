#include "avgq/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace avgq {

namespace {
std::atomic<int> g_threads{1};
}

int default_threads() { return g_threads.load(); }

void set_default_threads(int threads) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_threads.store(threads);
}

void parallel_for(std::uint64_t begin, std::uint64_t end, int threads,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  if (end <= begin) return;
  if (threads <= 0) threads = default_threads();
  const std::uint64_t span = end - begin;
  const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(std::max(threads, 1), span));
  if (workers <= 1) {
    body(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::uint64_t chunk = (span + workers - 1) / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = begin + w * chunk;
    const std::uint64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace avgq
