#pragma once

#include <cstddef>
#include <functional>

namespace pa {

/// Worker count: hardware concurrency capped by PRINCIPAL_ACTIONS_THREADS.
unsigned thread_count();

/// Runs body(i) for i in [0, n) across thread_count() workers in contiguous
/// chunks. Callers must make body(i) independent of the partition.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pa
