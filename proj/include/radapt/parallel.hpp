#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace radapt {

// Runs fn(i) for i in [0, n) across up to `threads` workers. Work items must
// be independent; callers that need randomness give each index its own child
// seed and reduce results in index order afterwards, so the outcome does not
// depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace radapt
