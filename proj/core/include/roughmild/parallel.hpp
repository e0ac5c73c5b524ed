#pragma once

#include <cstddef>
#include <functional>

namespace roughmild {

/// Worker count for fan-out loops: ROUGHMILD_THREADS if set (clamped to at
/// least 1), otherwise the hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0,n).  Work is split into contiguous chunks over
/// worker_count() threads; fn must be safe to call concurrently for
/// distinct indices.  Falls back to a plain loop when only one worker is
/// requested, which also gives a deterministic single-thread mode.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace roughmild
