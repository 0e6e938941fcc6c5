#pragma once

#include <cstddef>
#include <functional>

namespace wemstab {

// Resolves a worker-count request: n <= 0 means "use hardware concurrency".
std::size_t resolve_threads(int requested);

// Runs fn(begin, end) over contiguous chunks of [0, count) on `threads`
// workers. Chunk boundaries depend only on count and the resolved thread
// count, and every chunk writes disjoint output, so callers that keep
// per-index results get identical output for any thread count.
void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace wemstab
