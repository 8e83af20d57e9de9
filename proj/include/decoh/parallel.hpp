#pragma once

#include <cstddef>
#include <functional>

namespace decoh {

// Process-wide worker count used by every parallel loop. Defaults to 1.
void set_workers(int n);
int workers();

// Runs body(i) for i in [0, n). Indices are split into contiguous static
// blocks; each index is written by exactly one worker, so results do not
// depend on the worker count as long as body only writes slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace decoh
