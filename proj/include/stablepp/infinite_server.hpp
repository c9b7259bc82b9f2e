#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "stablepp/distributions.hpp"
#include "stablepp/mark_sequence.hpp"
#include "stablepp/rng.hpp"
#include "stablepp/tilted_walk.hpp"

namespace stablepp {

// A GI/GI/infinity system: inter-arrival times distributed as X/lambda and
// service times as V/nu, where X ~ base_arrival and V ~ base_mark.  The
// certificate machinery runs on the scaled laws with alpha = 1 and drift
// slack epsilon = epsilon_fraction * (scaled inter-arrival mean).  Build
// through make_system so the tilt is resolved once; the scaled models
// delegate to their bases with identical uniform draws, which is what makes
// common-random-number comparisons across (lambda, nu) meaningful.
struct ScaledSystem {
  std::shared_ptr<const InterArrivalModel> base_arrival;  // unit-rate law
  std::shared_ptr<const MarkModel> base_mark;             // unit-rate law
  double lambda = 1.0;
  double nu = 1.0;
  double epsilon_fraction = 0.5;
  std::shared_ptr<const InterArrivalModel> arrival;  // X / lambda
  std::shared_ptr<const MarkModel> mark;             // V / nu
  TiltParams tilt;

  // Stationary mean occupancy E[service] / E[inter-arrival].
  double mean_occupancy() const;
};

ScaledSystem make_system(std::shared_ptr<const InterArrivalModel> base_arrival,
                         std::shared_ptr<const MarkModel> base_mark,
                         double lambda = 1.0, double nu = 1.0,
                         double epsilon_fraction = 0.5);

// One customer in service: arrived `age` time units ago with total
// requirement `service`, so `residual` = service - age > 0 remains.
struct Customer {
  double age = 0.0;
  double service = 0.0;
  double residual = 0.0;
};

// Time-zero snapshot of the queue: the measure-valued descriptor (residual
// profile) plus the arrival age.  Customers are ordered by increasing age.
struct QueueState {
  std::vector<Customer> customers;
  double age = 0.0;  // time since the most recent arrival (> 0 when sampled
                     // exactly; 0 for a system observed at an arrival epoch)
  // Diagnostics from the exact sampler (0 for states built by other means):
  std::size_t kappa = 0;              // joint certificate index
  std::size_t arrivals_simulated = 0; // arrival epochs materialized
  std::uint64_t uniforms_consumed = 0;  // total draws across all streams
  std::uint64_t coin_flips = 0;  // passage coins spent certifying the walk

  std::size_t occupancy() const { return customers.size(); }
};

// Options for the exact sampler.  The fault-injection knobs deliberately
// break exactness and exist only so the validation battery can demonstrate
// that its tests catch such bugs.  Never enable them otherwise.
struct QueueOptions {
  MarkOptions mark_options;  // nominal_fill: unconditioned fill marks
  // Fault injection: skip the conditional extension of marks between the
  // mark certificate and the joint certificate, truncating the candidate
  // scan at the marks that happen to be materialized.
  bool skip_mark_extension = false;
};

// Exact draw from the stationary law of (residual profile, arrival age).
// Construction: mark block with certificate kappa_V; arrival block with
// certificate kappa_A and equilibrium first epoch; both extended to
// kappa + 1 = max(kappa_V, kappa_A) + 1; customer i <= kappa present iff
// V_i > A_i strictly, with residual V_i - A_i.
QueueState sample_stationary_queue(const ScaledSystem& system,
                                   std::uint64_t seed,
                                   std::uint64_t replication,
                                   const QueueOptions& options = {});

// Scalar summaries of one state.
struct QueueFunctionals {
  std::size_t occupancy = 0;
  double mean_residual = 0.0;  // 0 when empty (flag below)
  double max_residual = 0.0;   // 0 when empty: inf{y >= 0 : no residual > y}
  bool empty = true;
};
QueueFunctionals steady_state_functionals(const QueueState& state);

// Per-replication ingredients of the pathwise (IPA) derivative estimators.
// Averages run over present customers; the "argmax" fields belong to the
// customer with the largest residual (lowest index on ties).  When the
// system is empty every field is 0 and `empty` is set.
struct SensitivitySample {
  std::size_t occupancy = 0;
  double mean_age = 0.0;        // average elapsed service among present
  double mean_service = 0.0;    // average total requirement among present
  double mean_residual = 0.0;
  double max_residual = 0.0;
  double argmax_age = 0.0;
  double argmax_service = 0.0;
  bool empty = true;
};
SensitivitySample sensitivity_sample(const QueueState& state);

// A derivative estimate with its Monte Carlo standard error.
struct DerivativeEstimate {
  double value = 0.0;
  double se = 0.0;
};

// Steady-state derivative estimates over independent exact replications.
//
//   d/d lambda E[mean residual] = E[mean age] / lambda
//   d/d nu     E[mean residual] = -E[mean service] / nu
//   d/d lambda E[max residual]  = E[argmax age] / lambda
//   d/d nu     E[max residual]  = -E[argmax service] / nu
//
// Empty draws contribute zero to the max-residual family (the maximum of an
// empty profile is 0 and stays 0 under perturbation) but are excluded from
// the mean-residual family, whose target conditions on occupancy; `flagged`
// reports how many were excluded.
struct SensitivityEstimate {
  DerivativeEstimate d_lambda_mean_residual;
  DerivativeEstimate d_nu_mean_residual;
  DerivativeEstimate d_lambda_max_residual;
  DerivativeEstimate d_nu_max_residual;
  double mean_occupancy = 0.0;
  double mean_mean_residual = 0.0;  // average of per-draw mean residuals
  double mean_max_residual = 0.0;
  std::size_t replications = 0;
  std::size_t flagged = 0;
};
SensitivityEstimate ipa_sensitivities(const ScaledSystem& system,
                                      std::uint64_t seed,
                                      std::size_t replications,
                                      const QueueOptions& options = {});

// ---------------------------------------------------------------------------
// Forward transient simulation
// ---------------------------------------------------------------------------

// Options for the event-driven forward simulator.  `functional` maps the
// current occupancy to the integrand of the time average (identity when
// null).  `batch_count` splits the run into equal batches (equal arrival
// counts for arrival horizons, remainder discarded; equal time spans for
// time horizons) whose averages support batch-means analysis.
struct TransientOptions {
  std::function<double(std::size_t)> functional;
  std::size_t batch_count = 30;
};

struct TransientResult {
  double time_average = 0.0;  // (1/T) Integral_0^T f(occupancy(s)) ds
  double horizon = 0.0;       // elapsed simulated time T
  std::size_t arrivals = 0;   // arrivals that occurred in (0, T]
  std::vector<double> batch_means;
  QueueState final_state;     // snapshot at T (age = time since last arrival)
  std::uint64_t uniforms_consumed = 0;  // draws from the simulation stream
};

// Runs until the n-th arrival (horizon T = A_n, n >= 1).  The initial state
// defaults to an empty system observed at an arrival age of zero; when an
// exact stationary state is supplied the simulation continues it without
// bias: scheduled departures at the residuals, next arrival at the
// age-conditional forward recurrence.
TransientResult simulate_transient_arrivals(
    const ScaledSystem& system, std::size_t arrivals,
    const std::optional<QueueState>& initial, std::uint64_t seed,
    std::uint64_t replication, const TransientOptions& options = {});

// Runs until fixed time `horizon` > 0.
TransientResult simulate_transient_time(
    const ScaledSystem& system, double horizon,
    const std::optional<QueueState>& initial, std::uint64_t seed,
    std::uint64_t replication, const TransientOptions& options = {});

// Time averages at several arrival-count checkpoints along one sample path:
// element k is the time average over (0, A_{checkpoints[k]}].  Checkpoints
// must be strictly increasing.  Equivalent to simulate_transient_arrivals at
// each checkpoint with common randomness, in a single pass.
std::vector<double> transient_checkpoint_averages(
    const ScaledSystem& system, const std::vector<std::size_t>& checkpoints,
    const std::optional<QueueState>& initial, std::uint64_t seed,
    std::uint64_t replication, const TransientOptions& options = {});

}  // namespace stablepp
