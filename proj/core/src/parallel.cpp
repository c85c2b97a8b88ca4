#include "chiraldecay/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace chiraldecay {

namespace {
std::atomic<int> g_max_workers{0};
}

void set_max_workers(int n) { g_max_workers.store(n < 0 ? 0 : n); }

int max_workers() {
  const int cap = g_max_workers.load();
  if (cap > 0) return cap;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int workers = std::min(max_workers(), count);
  if (workers <= 1 || count < 4) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace chiraldecay
