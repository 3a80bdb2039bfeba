#pragma once

#include <functional>

namespace tdie {

/// requested > 0, else TDIE_THREADS, else the hardware concurrency (at least 1).
int worker_count(int requested = 0);

/// Splits [0, n) into contiguous blocks and runs body(worker, begin, end) on each,
/// one thread per block. Block w always covers the same range for given n and
/// workers, so per-worker results can be reduced in a fixed order.
void parallel_blocks(int n, int workers, const std::function<void(int, int, int)>& body);

}  // namespace tdie
