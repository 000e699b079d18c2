#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace relaxflow {

/// Recursive pairwise sum.  Fixed association order, so the result is
/// bit-identical run to run and independent of the thread count (reductions
/// always materialize per-cell values first, then sum serially).
double pairwise_sum(const double* data, std::size_t n);

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Run fn(begin, end) over contiguous chunks of [0, n), on up to `threads`
/// persistent worker threads.  Chunks are disjoint, so per-index writes never
/// race.  `grain` caps parallelism at one worker per `grain` items; light
/// per-item loops should pass a large grain so they stay serial and skip the
/// dispatch latency.
void parallel_for(std::size_t n, int threads, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn);

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace relaxflow
