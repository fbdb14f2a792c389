#pragma once

#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace homwalk {

// workers = 0 picks every available core; workers = 1 is the serial
// reference path, bit-identical to the parallel one by construction.
struct ExecPolicy {
  int workers = 0;
};

int resolve_workers(int requested);

// Kahan-Neumaier compensated sum in index order.  Used for every reduction
// over trajectories so that results do not depend on how work was scheduled.
double compensated_sum(const std::vector<double>& xs);

// Runs fn(i) for i = 0..n-1 and returns the results in index order.  The
// serial and parallel paths produce identical bytes because each index writes
// only its own slot and all reductions happen afterwards in index order.
template <class T, class Fn>
std::vector<T> map_indexed_serial(int n, const Fn& fn) {
  std::vector<T> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = fn(i);
  return out;
}

template <class T, class Fn>
std::vector<T> map_indexed(int n, const Fn& fn, ExecPolicy policy) {
  const int workers = resolve_workers(policy.workers);
  if (workers <= 1 || n <= 1) return map_indexed_serial<T>(n, fn);
#ifdef _OPENMP
  std::vector<T> out(static_cast<size_t>(n));
  std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < n; ++i) {
    try {
      out[static_cast<size_t>(i)] = fn(i);
    } catch (...) {
#pragma omp critical
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
#else
  return map_indexed_serial<T>(n, fn);
#endif
}

}  // namespace homwalk
