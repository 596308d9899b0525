#pragma once

#include <cstddef>
#include <functional>

namespace mobsig {

/// Worker count: MOEBIUS_SIG_THREADS if set (0 = auto), else hardware
/// concurrency.
std::size_t thread_budget();

/// Runs fn(i) for i in [0, n) on up to thread_budget() threads.  Results must
/// be written to preallocated per-index slots; the iteration order is
/// unspecified but the assignment of work is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mobsig
