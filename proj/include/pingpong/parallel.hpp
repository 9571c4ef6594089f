#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace pingpong {

/// Evaluate fn(chunk) for chunk = 0..chunks-1 on up to `threads` workers and
/// return the results in chunk order. Work is split by chunk index only, so
/// the output is independent of the thread count. threads == 0 means use the
/// hardware concurrency.
template <class R, class Fn>
std::vector<R> map_chunks(std::size_t chunks, unsigned threads, Fn&& fn) {
  std::vector<R> out(chunks);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) out[c] = fn(c);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < chunks; c += threads) out[c] = fn(c);
    });
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace pingpong
