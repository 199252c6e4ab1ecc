#pragma once

#include <cstddef>
#include <functional>

namespace hpland {

// Worker cap: LANDSCAPE_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t max_worker_count();

// Runs body(0..count-1) across up to max_worker_count() threads. Each index
// must write only to its own output slot, so results are identical to a
// sequential loop. The first exception thrown by any body is rethrown after
// all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hpland
