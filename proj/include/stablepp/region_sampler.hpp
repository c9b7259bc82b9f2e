#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "stablepp/arrival_sequence.hpp"
#include "stablepp/distributions.hpp"
#include "stablepp/mark_sequence.hpp"
#include "stablepp/rng.hpp"
#include "stablepp/tilted_walk.hpp"

namespace stablepp {

// One point of the marked process: an event at `time` carrying mark `value`.
struct MarkedPoint {
  double time = 0.0;
  double value = 0.0;
};

// Which half-line of the time axis a one-sided sample lives on.  Forward
// points carry positive times, backward points negative times; the two
// directions draw from disjoint stream families so a two-sided sample can run
// both from one (seed, replication) pair.
enum class Direction { kForward, kBackward };

// Everything needed to sample the restriction of a time-stationary marked
// renewal process to a stable set B inside the region
// C = { (t, v) : |v| >= |t|^alpha }.  `tilt` must be resolved for the arrival
// model with the same epsilon used to define slope = mean - epsilon; build
// configs through make_region_config.
//
// `predicate` selects the subset B: a pure function of the signed point
// coordinates, required to imply membership in C (B is a subset of C; that
// containment is what makes the restriction almost surely finite).  A null
// predicate means B = C.  The contract is enforced opportunistically: every
// scanned candidate that the predicate admits but that lies outside C throws
// std::invalid_argument.
struct RegionConfig {
  std::shared_ptr<const InterArrivalModel> arrival;
  std::shared_ptr<const MarkModel> mark;
  double alpha = 1.0;
  TiltParams tilt;
  std::function<bool(double, double)> predicate;  // null = whole region
  MarkOptions mark_options;  // validation-only fault injection pass-through
};

RegionConfig make_region_config(
    std::shared_ptr<const InterArrivalModel> arrival,
    std::shared_ptr<const MarkModel> mark, double alpha,
    std::optional<double> epsilon = std::nullopt);

// One side of the restriction.  Epochs 0 < A_1 < A_2 < ... carry i.i.d.
// marks V_1, V_2, ...; kappa = max of the arrival and mark certificate
// indices, so every point with index > kappa certifiably lies outside the
// region (index kappa + 1 is scanned as well; the certificate already pins it
// to the region boundary at best).  `members` holds the points
// (sign * A_m, V_m), m <= kappa + 1, admitted by the predicate, in
// increasing time order.  Times are negative for a backward sample.
struct HalfRegionSample {
  std::vector<MarkedPoint> members;
  ArrivalBlock arrivals;  // unsigned epochs: distance from time zero
  MarkBlock marks;
  std::size_t kappa = 0;
  Direction direction = Direction::kForward;
};

// A two-sided sample.  `members` concatenates the backward side (negative
// times) and the forward side, sorted by time.  The renewal interval
// straddling time zero has the stationary (length-biased) law and is split
// uniformly: the forward side starts at split * length, the backward side at
// (1 - split) * length.
struct RegionSample {
  std::vector<MarkedPoint> members;
  HalfRegionSample forward;
  HalfRegionSample backward;
  double straddle_length = 0.0;
  double straddle_split = 0.0;
};

// Samples one side of the stationary restriction.  With no first_epoch
// override, A_1 has the equilibrium (stationary-excess) law, which is the
// exact one-sided stationary description.  The direction fixes the sign of
// emitted times, the stream family, and the coordinates fed to the
// predicate.
HalfRegionSample sample_region_half(
    const RegionConfig& config, std::uint64_t seed, std::uint64_t replication,
    Direction direction, std::optional<double> first_epoch = std::nullopt);

// Samples the full two-sided stationary restriction.
RegionSample sample_region(const RegionConfig& config, std::uint64_t seed,
                           std::uint64_t replication);

// True iff |value| >= |time|^alpha (the region is closed).
bool region_contains(double time, double value, double alpha);

}  // namespace stablepp
