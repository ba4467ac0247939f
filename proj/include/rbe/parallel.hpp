#pragma once

#include <cstddef>
#include <functional>

namespace rbe {

/// Worker count: ROSEN_BKERR_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (0 or unset means auto).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each index
/// runs exactly once; the first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rbe
