#pragma once

#include <cstddef>
#include <functional>

namespace landau {

/// Worker cap: LANDAU_LAB_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index must write only its own output
/// slot; results are therefore independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace landau
