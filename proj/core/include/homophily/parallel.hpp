#pragma once

#include <cstddef>
#include <functional>

namespace homophily {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling. threads <= 1 runs inline in order.
// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace homophily
