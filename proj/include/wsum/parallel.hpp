#pragma once

#include <cstddef>
#include <functional>

namespace wsum {

// Monte Carlo work is split into fixed blocks of this many samples; block b
// always draws from SeededStream(seed, b).
inline constexpr std::size_t kBlockSize = std::size_t{1} << 16;

// Worker count: WSUM_THREADS if set and positive, otherwise hardware
// concurrency (0 or unset means auto).
unsigned worker_count();

// Runs body(b) for b in [0, num_blocks). Blocks may run concurrently and in
// any order; callers write only to block-owned storage.
void parallel_for_blocks(std::size_t num_blocks, const std::function<void(std::size_t)>& body);

}  // namespace wsum
