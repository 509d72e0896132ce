#pragma once

#include <cstddef>
#include <functional>

namespace reluipm {

/// Hardware concurrency, at least 1.
unsigned default_threads();

/// Calls body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; callers write results into slot i so the outcome does
/// not depend on scheduling. The first exception thrown is rethrown after all
/// workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace reluipm
