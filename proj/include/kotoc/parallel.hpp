#pragma once

#include <cstddef>
#include <functional>

namespace kotoc {

/// Worker count from KOTOC_THREADS, falling back to the hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index must write only to
/// its own output slot; callers reduce afterwards in index order. The first exception thrown
/// by any task is rethrown once all workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int workers = worker_count());

}  // namespace kotoc
