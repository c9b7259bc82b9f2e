// Benchmark: OpenMP replication-parallel runner vs the serial reference.
//
// Runs the same batch of exact stationary-queue replications through both
// paths, times them, and verifies the results are bitwise identical.  Exits
// nonzero if they ever differ.
//
// Usage: bench_parallel [reps] [lambda] [seed]

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "stablepp/distributions.hpp"
#include "stablepp/infinite_server.hpp"
#include "stablepp/parallel.hpp"
#include "stablepp/stats.hpp"

using namespace stablepp;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t reps =
      argc > 1 ? static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10))
               : 400;
  const double lambda = argc > 2 ? std::strtod(argv[2], nullptr) : 100.0;
  const std::uint64_t seed =
      argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 20260816ULL;

  const auto system = make_system(make_exponential_arrivals(1.0),
                                  make_lognormal_mark(-0.25, 0.5), lambda, 1.0);
  const auto body = [&](std::size_t rep) {
    return steady_state_functionals(sample_stationary_queue(system, seed, rep));
  };

  std::printf("replications        : %zu\n", reps);
  std::printf("arrival rate        : %g\n", lambda);
  std::printf("threads             : %d\n", replication_threads());

  const auto t_serial = std::chrono::steady_clock::now();
  const auto serial = run_replications_serial(reps, body);
  const double serial_s = seconds_since(t_serial);

  const auto t_parallel = std::chrono::steady_clock::now();
  const auto parallel = run_replications(reps, body);
  const double parallel_s = seconds_since(t_parallel);

  std::size_t mismatches = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    if (serial[rep].occupancy != parallel[rep].occupancy ||
        serial[rep].mean_residual != parallel[rep].mean_residual ||
        serial[rep].max_residual != parallel[rep].max_residual ||
        serial[rep].empty != parallel[rep].empty) {
      ++mismatches;
    }
  }

  std::vector<double> occupancy;
  occupancy.reserve(reps);
  for (const auto& f : parallel) occupancy.push_back(f.occupancy);
  const MeanSe occ = mean_and_se(occupancy);

  std::printf("serial wall time    : %.3f s  (%.3f ms/rep)\n", serial_s,
              1e3 * serial_s / static_cast<double>(reps));
  std::printf("parallel wall time  : %.3f s  (%.3f ms/rep)\n", parallel_s,
              1e3 * parallel_s / static_cast<double>(reps));
  std::printf("speedup             : %.2fx\n",
              parallel_s > 0.0 ? serial_s / parallel_s : 0.0);
  std::printf("mean occupancy      : %.4f +/- %.4f\n", occ.mean, occ.se);
  std::printf("bitwise mismatches  : %zu of %zu\n", mismatches, reps);

  if (mismatches != 0) {
    std::fprintf(stderr,
                 "FAIL: parallel results diverged from the serial reference\n");
    return 1;
  }
  return 0;
}
