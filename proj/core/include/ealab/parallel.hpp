#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ea {

// run fn(0..n-1) over an atomic work queue. Tasks must write only to their
// own slot of any shared output, which keeps results identical for every
// worker count. The first exception wins and is rethrown after the joins.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (workers <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::mutex err_mu;
  auto body = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min(workers, n);
  pool.reserve(std::size_t(nw));
  for (int w = 0; w < nw; ++w) pool.emplace_back(body);
  for (std::thread& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}
