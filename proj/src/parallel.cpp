#include "cuboid_spectra/parallel.hpp"

#include <atomic>

namespace cuboidspec::par {
namespace {
std::atomic<int> g_workers{1};
}

int worker_count() { return g_workers.load(std::memory_order_relaxed); }

void set_worker_count(int workers) {
  if (workers < 1) throw invalid_input("worker count must be >= 1");
  g_workers.store(workers, std::memory_order_relaxed);
}

int hardware_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace cuboidspec::par
