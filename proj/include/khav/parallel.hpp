#pragma once

#include <cstddef>
#include <functional>

namespace khav {

// Number of worker threads parallel_for will use: hardware concurrency,
// capped by the KHAV_THREADS environment variable when it is set to a
// positive integer. Always at least 1.
int worker_count();

// Runs fn(i) for every i in [0, count), splitting the index range into
// contiguous blocks across worker_count() threads. fn must write results to
// per-index slots (no synchronization is provided beyond the final join); any
// exception thrown by fn is rethrown on the calling thread. With one worker,
// or when count is small, everything runs on the calling thread.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn);

}  // namespace khav
