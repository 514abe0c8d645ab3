#pragma once

#include <cstddef>
#include <functional>

namespace rrshift {

/// Worker count: hardware concurrency, capped by RRSHIFT_THREADS, or 1 in
/// serial mode.
int thread_count();

/// Force single-threaded execution process-wide (the CLI --serial flag).
void set_serial(bool serial);
bool serial_mode();

/// Calls body(i) for i in [0, n). Indices are split into contiguous blocks,
/// one per worker. Callers write results into slot i and reduce afterwards
/// in index order, so output does not depend on the worker count. The first
/// exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rrshift
