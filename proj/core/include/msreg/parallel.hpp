#pragma once

#include <cstddef>
#include <functional>

namespace msreg {

// Runs fn(i) for i in [0, count) across a small thread pool. Each index must
// be an independent unit of work writing only to its own slot; callers that
// combine results do so afterwards in index order, so the outcome never
// depends on scheduling. max_threads = 0 means hardware concurrency.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned max_threads = 0);

}  // namespace msreg
