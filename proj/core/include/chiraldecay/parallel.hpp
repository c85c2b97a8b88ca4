#pragma once

#include <functional>

namespace chiraldecay {

// Worker cap for embarrassingly parallel sweeps. 0 = hardware concurrency.
void set_max_workers(int n);
int max_workers();

// Runs fn(i) for i in [0, count). Chunked over std::thread; falls back to the
// calling thread for small counts or a cap of 1. fn must only touch state
// disjoint across indices.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace chiraldecay
