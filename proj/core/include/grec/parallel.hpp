#pragma once

#include <cstddef>
#include <functional>

namespace grec {

// Worker cap: GREC_THREADS when set (minimum 1), otherwise the hardware
// concurrency.
std::size_t default_thread_budget();

// Runs fn(0) .. fn(count - 1) across at most max_threads workers
// (0 = default budget). Indices are claimed through an atomic counter, so
// callers must write results into per-index slots; the combined output is
// then identical for any schedule or thread count. The first exception is
// rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t max_threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace grec
