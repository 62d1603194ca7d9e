#pragma once

#include <cstddef>
#include <functional>

namespace sh {

// Worker count: STRIP_HELMHOLTZ_THREADS if set, else the hardware concurrency.
int thread_count();

// Calls body(i) for i in [0, n), split into contiguous blocks across threads.
// Each index is visited exactly once, so results written by index are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sh
