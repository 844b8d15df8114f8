#include "cosparse/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace cosparse {
namespace {

int env_budget() {
  static const int cached = [] {
    const char* value = std::getenv("COSPARSE_THREADS");
    int n = 0;
    if (value != nullptr) n = std::atoi(value);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
  }();
  return cached;
}

thread_local int tls_override = 0;

}  // namespace

int thread_budget() {
  return tls_override > 0 ? tls_override : env_budget();
}

ThreadBudgetGuard::ThreadBudgetGuard(int budget) : previous_(tls_override) {
  tls_override = budget > 0 ? budget : 1;
}

ThreadBudgetGuard::~ThreadBudgetGuard() { tls_override = previous_; }

void parallel_for_chunks(
    std::int64_t n, std::int64_t chunk,
    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body) {
  const std::int64_t chunks = chunk_count(n, chunk);
  if (chunks == 0) return;
  const int workers = static_cast<int>(
      std::min<std::int64_t>(thread_budget(), chunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) {
      body(c, c * chunk, std::min(n, (c + 1) * chunk));
    }
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto run = [&] {
    // nested parallel loops inside body run serially
    ThreadBudgetGuard guard(1);
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= chunks) break;
      body(c, c * chunk, std::min(n, (c + 1) * chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace cosparse
