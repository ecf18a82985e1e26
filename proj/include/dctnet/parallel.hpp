#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace dctnet {

// Runs fn(i) for i in [0, count) across hardware threads. Each index is
// processed exactly once; callers keep determinism by writing only to
// index-owned slots. The first exception thrown by any worker is rethrown
// after all workers finish.
inline void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
  if (count == 0) return;
  const size_t workers = std::min<size_t>(
      count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          // Keep only the first failure; later ones race for work that no
          // longer matters.
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dctnet
