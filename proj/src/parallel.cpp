#include "mvm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace mvm {

std::uint64_t substreamSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

int workerCount() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("MVM_THREADS")) {
    int limit = std::atoi(cap);
    if (limit >= 1) n = std::min(n, limit);
  }
  return n;
}

void parallelFor(std::size_t count, const std::function<void(std::size_t)>& f) {
  if (count == 0) return;
  const int workers = std::min<std::size_t>(workerCount(), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  const std::size_t chunk =
      std::max<std::size_t>(1, count / (static_cast<std::size_t>(workers) * 16));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
      if (begin >= count) return;
      const std::size_t end = std::min(begin + chunk, count);
      for (std::size_t i = begin; i < end; ++i) f(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

double treeSum(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::size_t n = values.size();
  while (n > 1) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i)
      values[i] = values[2 * i] + values[2 * i + 1];
    if (n % 2 == 1) {
      values[half] = values[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return values[0];
}

}  // namespace mvm
