#pragma once

#include <cstddef>
#include <functional>

namespace graphkdv {

// Worker count: GRAPHKDV_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
// write results into per-index slots so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace graphkdv
