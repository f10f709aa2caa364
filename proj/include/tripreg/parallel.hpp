#pragma once

#include <cstddef>
#include <functional>

namespace tripreg {

/// Upper bound on worker threads used by per-item loops. 0 selects the
/// hardware concurrency.
void set_max_threads(std::size_t threads);
std::size_t max_threads();

/// Runs body(i) for i in [0, count) over contiguous chunks. Every index is
/// visited exactly once and body must only write state owned by index i, so
/// results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tripreg
