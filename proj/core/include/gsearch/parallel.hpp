#pragma once

#include <cstddef>
#include <functional>

namespace gsearch {

/// Worker count: GRAPHENE_SEARCH_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each index runs exactly
/// once; results must be written to per-index slots so the outcome is order independent.
/// The first exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gsearch
