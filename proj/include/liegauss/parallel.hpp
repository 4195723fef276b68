#pragma once

#include <functional>

namespace liegauss {

/// Worker-pool width: LIEGAUSS_THREADS if set (>=1), else hardware
/// concurrency.
int max_threads();

/// Runs fn(block_index, begin, end) over [0, n) split into blocks of
/// block_size items. Blocks are distributed over threads; callers must write
/// results per block and reduce in block order so output is independent of
/// the thread count.
void parallel_for_blocks(long n, long block_size,
                         const std::function<void(long, long, long)>& fn);

}  // namespace liegauss
