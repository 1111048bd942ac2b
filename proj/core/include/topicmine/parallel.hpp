#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace topicmine {

// Splits [0, n) into `threads` contiguous blocks and runs fn(block, begin, end)
// on each. Block boundaries depend only on n and threads, so per-block
// accumulators merged in block order give a result that is a pure function of
// the thread count.
template <typename Fn>
void parallel_blocks(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  const std::size_t blocks = std::min<std::size_t>(threads, std::max<std::size_t>(n, 1));
  auto bounds = [&](std::size_t b) { return n * b / blocks; };
  if (blocks == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(blocks);
  pool.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    pool.emplace_back([&, b] {
      try {
        fn(b, bounds(b), bounds(b + 1));
      } catch (...) {
        errors[b] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::size_t block_count(std::size_t n, unsigned threads) {
  return std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1));
}

}  // namespace topicmine
