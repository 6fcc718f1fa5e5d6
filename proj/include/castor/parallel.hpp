#pragma once

#include <cstddef>
#include <functional>

namespace castor {

// 0 means one worker per hardware thread.
std::size_t resolve_threads(std::size_t requested);

// Runs body(begin, end, worker) over contiguous chunks of [0, count). Chunks
// are claimed dynamically; callers must write disjoint outputs. The first
// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                  std::size_t grain = 1);

}  // namespace castor
