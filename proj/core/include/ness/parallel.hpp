#pragma once

#include <functional>

namespace ness {

/// Worker cap: NESS_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Work is
/// handed out by index; the first exception thrown is rethrown after join.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace ness
