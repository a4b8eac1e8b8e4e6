#pragma once

#include <cstddef>
#include <functional>

namespace torsion {

/// Worker count from TORSION_BOUND_THREADS, else hardware concurrency (>= 1).
unsigned default_workers();

/**
 * Runs `body(begin, end)` over [0, count) split into contiguous chunks.
 * workers == 0 means default_workers(). Callers write results by index, so
 * the outcome does not depend on how indices are partitioned.
 */
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace torsion
