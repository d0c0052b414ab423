#pragma once

#include <cstdint>
#include <functional>

namespace dtomo {

// Number of worker threads (DTOMO_THREADS overrides hardware concurrency).
int worker_count();

// Runs fn over [0, n) split into contiguous chunks, one per worker.
// Callers must write to disjoint, index-addressed storage so that the
// result does not depend on the partition.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace dtomo
