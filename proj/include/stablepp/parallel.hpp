#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace stablepp {

// Replication-level parallelism.
//
// Every sampler in this library derives all of its randomness from a
// (seed, replication) pair, so distinct replications share no mutable state
// and can run in any order on any thread.  The runners below exploit that:
// `run_replications` distributes replications across OpenMP threads, each
// writing its own result slot, while `run_replications_serial` is the plain
// loop kept as a reference implementation.  Both return results indexed by
// replication, and because each replication is a pure function of its index
// the two paths produce identical values — tests compare them bitwise.

// Serial reference: evaluates body(rep) for rep = 0 .. count-1 in order.
template <typename Fn>
auto run_replications_serial(std::size_t count, Fn&& body)
    -> std::vector<std::decay_t<decltype(body(std::size_t{0}))>> {
  std::vector<std::decay_t<decltype(body(std::size_t{0}))>> out;
  out.reserve(count);
  for (std::size_t rep = 0; rep < count; ++rep) {
    out.push_back(body(rep));
  }
  return out;
}

// OpenMP path: same contract and same results as the serial reference.
// Results land in replication order regardless of the thread schedule.  The
// first exception thrown by any replication is captured and rethrown on the
// calling thread after the region joins (exceptions must not cross an OpenMP
// region boundary); remaining replications are skipped on a best-effort
// basis.  Falls back to the serial loop when built without OpenMP.
template <typename Fn>
auto run_replications(std::size_t count, Fn&& body)
    -> std::vector<std::decay_t<decltype(body(std::size_t{0}))>> {
  using Result = std::decay_t<decltype(body(std::size_t{0}))>;
#if defined(_OPENMP)
  std::vector<std::optional<Result>> slots(count);
  std::exception_ptr failure = nullptr;
  std::atomic<bool> failed{false};
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t rep = 0; rep < n; ++rep) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      slots[static_cast<std::size_t>(rep)].emplace(
          body(static_cast<std::size_t>(rep)));
    } catch (...) {
#pragma omp critical(stablepp_run_replications)
      {
        if (!failure) failure = std::current_exception();
      }
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Result> out;
  out.reserve(count);
  for (auto& slot : slots) {
    out.push_back(std::move(*slot));
  }
  return out;
#else
  return run_replications_serial(count, std::forward<Fn>(body));
#endif
}

// Number of threads the parallel runner would use.
inline int replication_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace stablepp
