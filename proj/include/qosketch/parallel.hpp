#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qosketch {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs fn(i) for i in [0, n). Work items must write only to slots owned by
// index i; under that contract the result is identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      std::size_t begin = cursor.fetch_add(kChunk);
      if (begin >= n) return;
      std::size_t end = std::min(begin + kChunk, n);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Map-reduce with a fixed chunk grid: partials are combined in chunk order,
// so floating-point reductions do not depend on the thread count.
template <typename Acc, typename MapFn, typename CombineFn>
Acc parallel_reduce(std::size_t n, unsigned threads, Acc init, MapFn&& map_chunk,
                    CombineFn&& combine) {
  constexpr std::size_t kChunk = 256;
  const std::size_t num_chunks = (n + kChunk - 1) / kChunk;
  std::vector<Acc> partials(num_chunks, init);
  parallel_for(num_chunks, threads, [&](std::size_t c) {
    std::size_t begin = c * kChunk;
    std::size_t end = std::min(begin + kChunk, n);
    partials[c] = map_chunk(begin, end);
  });
  Acc total = init;
  for (std::size_t c = 0; c < num_chunks; ++c) total = combine(total, partials[c]);
  return total;
}

}  // namespace qosketch
