#pragma once

#include <functional>

namespace gibbs {

// Runs body(0..count-1) on up to `threads` workers. Each index is handled
// exactly once; callers write into per-index slots so results do not
// depend on scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace gibbs
