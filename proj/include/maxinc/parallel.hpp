#pragma once

#include <cstddef>
#include <functional>

namespace maxinc {

// Runs body(i) for every i in [0, count) on up to `workers` threads (0 means
// hardware concurrency). Results must be written to per-index slots so the
// outcome does not depend on scheduling. If any call throws, remaining work
// is abandoned and the exception from the smallest failing index is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

unsigned resolve_workers(unsigned workers);

}  // namespace maxinc
