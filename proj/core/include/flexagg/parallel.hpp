#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace flexagg {

// Worker cap from FLEXAGG_THREADS (0 or unset = hardware concurrency).
int worker_count();

// Runs body(begin, end) over contiguous chunks of [0, count) on up to
// worker_count() threads. Chunks are disjoint; body must not share mutable
// state across chunks.
template <typename Body>
void parallel_chunks(std::size_t count, std::size_t min_chunk, Body body) {
  const std::size_t by_size = std::max<std::size_t>(1, count / std::max<std::size_t>(1, min_chunk));
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), by_size);
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t step = (count + workers - 1) / workers;
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t begin = 0; begin < count; begin += step) {
    threads.emplace_back(body, begin, std::min(count, begin + step));
  }
}

}  // namespace flexagg
