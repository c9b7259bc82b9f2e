#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stablepp/distributions.hpp"
#include "stablepp/rng.hpp"
#include "stablepp/tilted_walk.hpp"

namespace stablepp {

// Arrival epochs A_1 < A_2 < ... carrying the growth certificate
//   A_{n+1} >= n * slope   for every n >= kappa,
// guaranteed jointly for the realized prefix and every future extension.
// A_1 follows the stationary recurrence law by default (time-stationary
// process seen from the origin); the gaps beyond A_1 are nominal renewals.
struct ArrivalBlock {
  std::vector<double> epochs;
  std::size_t kappa = 0;
  double slope = 0.0;
  CertifiedWalk walk;  // certified gap walk; walk.xs[i] = A_{i+2} - A_{i+1}
};

// Draws A_1 (from `arrivals`) and the certified gap walk.  `first_epoch`
// overrides the A_1 law with a fixed value >= 0 — used when the enclosing
// construction supplies the straddling interval itself.
ArrivalBlock sample_arrivals(const InterArrivalModel& x, const TiltParams& tilt,
                             RngStream& arrivals, RngStream& coins,
                             std::optional<double> first_epoch = std::nullopt);

// Extends the block until it holds at least `count` epochs.
void ensure_epochs(ArrivalBlock& block, const InterArrivalModel& x,
                   const TiltParams& tilt, std::size_t count,
                   RngStream& arrivals, RngStream& coins);

// Verifies the growth certificate on epochs [from_epoch, size): every
// materialized A_{n+1} with n >= kappa satisfies A_{n+1} >= n * slope.
// Throws std::logic_error on violation.  Runs automatically after sampling
// and extension; exposed for composition checks downstream.
void assert_arrival_certificate(const ArrivalBlock& block,
                                std::size_t from_epoch = 0);

}  // namespace stablepp
