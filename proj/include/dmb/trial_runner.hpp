#pragma once

#include <exception>
#include <type_traits>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dmb/rng.hpp"

namespace dmb {

enum class Parallelism { serial, openmp };

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// Runs `trials` independent simulations. Trial i always receives the child
// stream base.split(i) and writes into slot i, so the serial and OpenMP paths
// return bit-identical vectors; only wall time differs.
template <typename Fn>
auto run_trials(int trials, const Rng& base, Fn&& fn,
                Parallelism mode = Parallelism::openmp) {
  using Result = std::invoke_result_t<Fn&, int, Rng>;
  static_assert(!std::is_void_v<Result>, "trial function must return a value");
  std::vector<Result> results(static_cast<std::size_t>(trials));
  if (trials == 0) return results;

  if (mode == Parallelism::serial) {
    for (int i = 0; i < trials; ++i) {
      results[static_cast<std::size_t>(i)] =
          fn(i, base.split(static_cast<std::uint64_t>(i)));
    }
    return results;
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < trials; ++i) {
    try {
      results[static_cast<std::size_t>(i)] =
          fn(i, base.split(static_cast<std::uint64_t>(i)));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace dmb
