#ifndef STATIONMATCH_PARALLEL_H_
#define STATIONMATCH_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stationmatch {

// Number of worker threads to use when the caller passes 0.
inline unsigned defaultThreads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Calls fn(i) for every i in [0, n). Work is handed out dynamically, so fn
// must only write to index-owned output slots. The first exception thrown by
// any worker is rethrown on the calling thread.
template <typename Fn>
void parallelFor(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = defaultThreads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> nextIdx{0};
  std::exception_ptr error;
  std::mutex errorMtx;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        std::size_t i = nextIdx.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(errorMtx);
          if (!error) error = std::current_exception();
          nextIdx = n;
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace stationmatch

#endif  // STATIONMATCH_PARALLEL_H_
