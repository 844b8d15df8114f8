#pragma once

#include <cstdint>
#include <functional>

namespace cosparse {

// Worker cap: COSPARSE_THREADS env var (0 or unset = hardware concurrency),
// further limited by any active ThreadBudgetGuard on this thread.
int thread_budget();

// Scoped override, used by callers that already parallelize at a coarser
// level and want nested loops to run serially.
class ThreadBudgetGuard {
 public:
  explicit ThreadBudgetGuard(int budget);
  ~ThreadBudgetGuard();
  ThreadBudgetGuard(const ThreadBudgetGuard&) = delete;
  ThreadBudgetGuard& operator=(const ThreadBudgetGuard&) = delete;

 private:
  int previous_;
};

inline std::int64_t chunk_count(std::int64_t n, std::int64_t chunk) {
  return n <= 0 ? 0 : (n + chunk - 1) / chunk;
}

// Runs body(chunk_index, begin, end) over fixed-size chunks of [0, n).
// The partition depends only on n and chunk, never on the worker count, so
// per-chunk results merged in chunk order are bitwise reproducible.
void parallel_for_chunks(
    std::int64_t n, std::int64_t chunk,
    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body);

}  // namespace cosparse
