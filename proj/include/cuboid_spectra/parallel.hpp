#pragma once

// Minimal deterministic work splitter.  Chunks are combined in index order, so
// integer reductions and sort-after-append pipelines give identical results
// for every worker count.  Nested calls run serially (thread_local guard).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "cuboid_spectra/core.hpp"

namespace cuboidspec::par {

int worker_count();
void set_worker_count(int workers);        // workers >= 1
int hardware_workers();

namespace detail {
inline thread_local bool in_parallel_region = false;
}

// Calls body(begin_i, end_i) on consecutive sub-ranges of [begin, end).
// Bodies run concurrently; each must only touch its own state.
template <class Body>
void parallel_for(std::int64_t begin, std::int64_t end, Body&& body) {
  if (end <= begin) return;
  const std::int64_t span = end - begin;
  int workers = worker_count();
  if (detail::in_parallel_region || workers <= 1 || span < 2) {
    body(begin, end);
    return;
  }
  workers = static_cast<int>(std::min<std::int64_t>(workers, span));
  // Fixed chunking: chunk boundaries depend only on [begin,end) and the
  // worker count; callers needing worker-count independence must combine
  // order-insensitively (integer sums) or re-sort afterwards.
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t base = span / workers;
  const std::int64_t extra = span % workers;
  std::int64_t cursor = begin;
  std::exception_ptr error;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::int64_t len = base + (w < extra ? 1 : 0);
    const std::int64_t lo = cursor;
    const std::int64_t hi = cursor + len;
    cursor = hi;
    pool.emplace_back([&, lo, hi, w] {
      detail::in_parallel_region = true;
      try {
        body(lo, hi);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
      detail::in_parallel_region = false;
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace cuboidspec::par
