#pragma once

#include <cstddef>
#include <functional>

namespace lcdsc {

/// Worker count from LCDSC_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into per-index slots so output never depends on scheduling.
/// Nested calls run serially on the calling thread. The first exception thrown
/// by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lcdsc
