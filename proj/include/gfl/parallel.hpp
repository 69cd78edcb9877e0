#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gfl {

/// Upper bound on worker threads used by library sweeps. 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks; the
/// caller is responsible for writing results into per-index slots so that the
/// outcome does not depend on the schedule. If workers throw, the exception
/// from the lowest-indexed chunk is rethrown after all workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Evaluates fn(i) for every index and returns the results in index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace gfl
