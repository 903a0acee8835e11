#include "dialectica/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dialectica {

unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 16u);
}

namespace {

// Runs body on `threads` workers and rethrows the first exception.
void run_workers(unsigned threads, const std::function<void()>& body) {
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      try {
        body();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::optional<std::size_t> parallel_find_first(std::size_t n, unsigned jobs,
                                               const std::function<bool(std::size_t)>& fn) {
  unsigned threads = std::min<std::size_t>(resolve_jobs(jobs), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      if (fn(i)) return i;
    return std::nullopt;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{n};
  run_workers(threads, [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n || i >= best.load()) return;
      if (fn(i)) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    }
  });
  std::size_t b = best.load();
  if (b == n) return std::nullopt;
  return b;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  unsigned threads = std::min<std::size_t>(resolve_jobs(jobs), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  run_workers(threads, [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  });
}

}  // namespace dialectica
