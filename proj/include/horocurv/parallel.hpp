// parallel.hpp - index-parallel execution with deterministic results. Workers
// write into per-index slots, so the output is independent of thread count and
// scheduling; reductions go through pairwise_sum afterwards.
#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace horocurv {

// Runs f(i) for i in [0, count). Exceptions are captured and the first one
// rethrown after all workers join.
template <class F>
void parallel_for(std::size_t count, F&& f) {
  if (count == 0) return;
  const std::size_t hw = std::thread::hardware_concurrency();
  const std::size_t workers = std::min(count, hw == 0 ? 1 : hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < count; i += workers) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace horocurv
