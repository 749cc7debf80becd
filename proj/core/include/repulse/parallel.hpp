#pragma once

#include <cstddef>
#include <functional>

namespace repulse {

/// Worker count from REPULSE_THREADS (positive integer), else hardware concurrency.
[[nodiscard]] unsigned thread_budget();

/// Runs body(i) for i in [0, n) on up to `threads` workers using static
/// contiguous chunks. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace repulse
