#ifndef AEP_PARALLEL_HPP
#define AEP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace aep {

/// Runs fn(0) .. fn(n-1) on up to `workers` threads. Each task must write
/// only to its own output slot; aggregation happens after the join, in task
/// order, so results do not depend on the worker count. workers <= 1 runs
/// inline. The first exception thrown by a task is rethrown on the caller.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

} // namespace aep

#endif
