#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace grushin {

/// Process-wide worker count used by parallel_for (default 1).
void set_thread_count(int n);
int thread_count();

/// Runs f(i) for i in [0, n). Work is handed out by an atomic counter; callers
/// write into slot i, so results never depend on scheduling. The first exception
/// thrown by a worker is rethrown after all workers join.
template <class F>
void parallel_for(Eigen::Index n, F&& f) {
  const int workers = static_cast<int>(std::min<Eigen::Index>(thread_count(), n));
  if (workers <= 1) {
    for (Eigen::Index i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<Eigen::Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (Eigen::Index i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace grushin
