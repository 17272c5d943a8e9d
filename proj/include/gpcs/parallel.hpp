#ifndef GPCS_PARALLEL_HPP
#define GPCS_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace gpcs {

namespace detail {
inline bool& in_parallel_region() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

// Worker count: GPCS_THREADS env var if set, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("GPCS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs body(i) for i in [0, n). Each index must write only to its own
// output slot, so the result is identical for any worker count. Nested
// calls degrade to sequential execution.
template <class Body>
void parallel_for_index(std::size_t n, Body&& body) {
  const unsigned workers = worker_count();
  if (n == 0) return;
  if (workers <= 1 || n == 1 || detail::in_parallel_region()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  const unsigned used = static_cast<unsigned>(
      std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(used);
  std::vector<std::thread> threads;
  threads.reserve(used);
  for (unsigned w = 0; w < used; ++w) {
    threads.emplace_back([&, w]() {
      detail::in_parallel_region() = true;
      try {
        for (std::size_t i = w; i < n; i += used) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
      detail::in_parallel_region() = false;
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace gpcs

#endif  // GPCS_PARALLEL_HPP
