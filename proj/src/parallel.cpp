#include "liegauss/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace liegauss {

int max_threads() {
  if (const char* env = std::getenv("LIEGAUSS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for_blocks(long n, long block_size,
                         const std::function<void(long, long, long)>& fn) {
  if (n <= 0) return;
  const long n_blocks = (n + block_size - 1) / block_size;
  const int n_threads = static_cast<int>(std::min<long>(max_threads(), n_blocks));
  if (n_threads <= 1) {
    for (long ib = 0; ib < n_blocks; ++ib) {
      fn(ib, ib * block_size, std::min(n, (ib + 1) * block_size));
    }
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const long ib = next.fetch_add(1);
        if (ib >= n_blocks) return;
        fn(ib, ib * block_size, std::min(n, (ib + 1) * block_size));
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace liegauss
