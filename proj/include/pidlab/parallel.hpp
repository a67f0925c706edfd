#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace pidlab {

enum class Execution { Serial, Parallel };

// Evaluates fn(0..n-1) into a vector indexed by trial. The parallel path fans trials out over
// OpenMP threads; the serial path is the reference it is tested against. Results never depend
// on the schedule because every trial writes only its own slot.
template <class T, class Fn>
std::vector<T> run_trials(std::size_t n, Fn&& fn, Execution exec = Execution::Parallel) {
  std::vector<T> out(n);
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

int worker_threads();

}  // namespace pidlab
