#pragma once

#include <cstddef>
#include <functional>

namespace rptsc {

/// Number of worker threads to use. Honors RPTSC_THREADS as an upper bound on
/// the hardware concurrency; always at least 1.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Iterations are distributed over at most
/// worker_count() threads; the caller must make iterations write disjoint state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace rptsc
