#pragma once

#include <cstddef>
#include <functional>

namespace ricdyn {

/// Worker count: RD_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Calls fn(i) for i in [0, n), splitting the range into contiguous blocks
/// across thread_count() workers. fn must not touch shared mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ricdyn
