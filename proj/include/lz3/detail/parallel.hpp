#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace lz3::detail {

// Runs `work(chunk_index)` for chunk_index in [0, n_chunks) on a small worker
// pool.  Chunks may execute in any order; callers keep determinism by
// writing per-chunk results and merging them in chunk order afterwards.
inline void parallel_chunks(std::size_t n_chunks,
                            const std::function<void(std::size_t)>& work,
                            unsigned workers = 0) {
  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
  }
  if (workers <= 1 || n_chunks <= 1) {
    for (std::size_t i = 0; i < n_chunks; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_chunks) return;
      work(i);
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<std::size_t>(workers, n_chunks);
  pool.reserve(n);
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(body);
  for (auto& th : pool) th.join();
}

}  // namespace lz3::detail
