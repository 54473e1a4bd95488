#pragma once

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hdg {

/// Serial is the reference path kept for testing; Parallel distributes
/// independent element work over OpenMP threads.
enum class Execution { Serial, Parallel };

inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Calls body(i) for i in [0, n). Bodies must only write to slot i of their
/// outputs. The first exception thrown by any body is rethrown after the loop.
template <class Body>
void for_each_element(Execution policy, int n, Body&& body) {
  if (policy == Execution::Serial) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace hdg
