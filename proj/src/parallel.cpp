#include "gfl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace gfl {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned n) { g_max_threads = n; }

unsigned max_threads() {
  const unsigned n = g_max_threads.load();
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(max_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    threads.emplace_back([&, w, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  // Lowest chunk wins so the reported error does not depend on timing.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace gfl
