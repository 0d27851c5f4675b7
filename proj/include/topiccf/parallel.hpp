#pragma once

#include <cstddef>
#include <functional>

namespace topiccf {

/// Worker cap: TOPICCF_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs fn(0..n-1) over worker_count() threads in contiguous chunks. `fn`
/// must only write to per-index state. The first exception thrown by any
/// worker is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace topiccf
