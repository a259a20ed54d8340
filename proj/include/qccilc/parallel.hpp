#pragma once

#include <cstddef>
#include <functional>

namespace qccilc {

/// Worker count: QCCILC_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n) across thread_count() workers; calls made
/// from inside a body run serially. Exceptions
/// from workers are rethrown (the one with the lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qccilc
