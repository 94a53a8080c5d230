#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trajsfm {

// Runs fn(i) for i in [0, count) on up to num_threads workers using static
// contiguous chunks. fn must only write state owned by index i; results are
// then independent of the thread count. The first exception is rethrown.
template <typename Fn>
void ParallelFor(size_t count, int num_threads, Fn&& fn) {
  const size_t workers = std::min<size_t>(
      std::max(1, num_threads), std::max<size_t>(1, count));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const size_t chunk = (count + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    const size_t begin = w * chunk;
    const size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&, begin, end] {
      try {
        for (size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

inline int DefaultThreadCount() {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace trajsfm
