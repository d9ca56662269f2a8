#pragma once

#include <cstddef>
#include <functional>

namespace casimir {

/// Number of hardware threads, at least 1.
int default_threads();

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Each index runs exactly once;
/// if any call throws, the exception of the lowest failing index is rethrown after all workers
/// have finished. Callers write results into per-index slots, so reductions stay ordered.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

} // namespace casimir
