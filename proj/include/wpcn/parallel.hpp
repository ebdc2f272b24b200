#pragma once

// Minimal fork-join loop over an index range. Workers pull indices from a
// shared counter; results are written by index, so callers that reduce in
// index order get bit-identical output for any thread count.

#include <cstddef>
#include <functional>

namespace wpcn {

/// Worker count from WPCN_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Calls body(i) for i in [0, count). Exceptions from body are rethrown
/// (the first one wins) after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace wpcn
