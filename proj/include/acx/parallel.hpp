#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace acx {

// Calls f(i) for i in [0, n) on up to `threads` workers with a static
// partition; f must only write to slot i of its outputs.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) f(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace acx
