#pragma once

#include <cstddef>
#include <functional>

namespace sonoloc {

/// Runs fn(i) for i in [0, count) on up to `jobs` worker threads.
/// Each index is processed exactly once; callers write results into
/// index-addressed slots so output order never depends on scheduling.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace sonoloc
