#pragma once

#include <cstddef>
#include <functional>

namespace uq {

/// Number of worker threads to use; 0 resolves to hardware concurrency,
/// the UQ_THREADS environment variable overrides.
unsigned resolve_threads(unsigned requested);

/// Run fn(i) for i in [0, count) on up to `threads` workers. Work items must
/// be independent; results must be written to disjoint slots so the outcome
/// is identical to the sequential order.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace uq
