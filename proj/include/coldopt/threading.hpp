#pragma once

#include <cstddef>
#include <functional>

namespace coldopt {

/// Worker count: hardware concurrency, optionally capped by the
/// COLDOPT_THREADS environment variable; at least 1.
std::size_t thread_budget();

/// Partitions [0, n) into contiguous chunks and runs
/// fn(chunk_index, begin, end) on up to thread_budget() workers.
/// Callers that reduce per-chunk results under a total order stay
/// deterministic regardless of scheduling or worker count.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

} // namespace coldopt
