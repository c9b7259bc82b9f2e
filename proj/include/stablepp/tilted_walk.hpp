#pragma once

#include <cstdint>
#include <vector>

#include "stablepp/distributions.hpp"
#include "stablepp/rng.hpp"

namespace stablepp {

// Change-of-measure parameters for the centered walk with steps
// Y = slope - X, slope = E[X] - epsilon.  The walk drifts down at rate
// epsilon; eta is the positive root of its step cumulant, so tilting Y by eta
// (equivalently X by -eta) flips the drift sign without renormalization.
struct TiltParams {
  double epsilon = 0.0;
  double slope = 0.0;         // E[X] - epsilon > 0
  double eta = 0.0;           // +inf when X >= slope a.s. (walk can never rise)
  double tilted_drift = 0.0;  // E[Y] under the tilted proposal measure
};

// Finds the tilt for a given drift slack.  Throws std::invalid_argument for
// epsilon outside (0, E[X]) and NoTiltRootError if the root search fails.
TiltParams resolve_tilt(const InterArrivalModel& x, double epsilon);

// Default slack E[X]/2, halving up to 6 times if the root search fails.
TiltParams resolve_tilt_auto(const InterArrivalModel& x);

// One acceptance-rejection passage attempt: decides whether the centered walk
// started at 0 ever exceeds xi >= 0 and, when it does, returns the increments
// X_1..X_T up to the first passage, distributed per the original walk
// conditioned on that upcrossing.  Consumes only from `coins`, and the number
// of uniforms used depends only on the proposal path lengths.
struct PassageAttempt {
  bool crossed = false;
  std::vector<double> xs;
};
PassageAttempt sample_passage_coin(const InterArrivalModel& x,
                                   const TiltParams& tilt, double xi,
                                   RngStream& coins);

// A nominal-law walk prefix X_1..X_N carrying a finite-sample certificate:
// kappa is the last index n with centered sum above 0 (0 when none), and the
// unseen continuation beyond the prefix is conditioned to keep its centered
// path at or below `level` (= position at the moment the last passage coin
// failed) forever.
struct CertifiedWalk {
  std::vector<double> xs;
  std::size_t kappa = 0;
  double level = 0.0;     // certified ceiling for the centered path, <= 0
  double position = 0.0;  // centered position after the last increment
  std::uint64_t coin_flips = 0;  // passage coins consumed (diagnostics)
};

// Builds the certified prefix by alternating passage coins at the current
// position with nominal descent runs back to level <= 0.  Nominal steps come
// from `arrivals`, all passage-coin randomness from `coins`.
CertifiedWalk sample_certified_walk(const InterArrivalModel& x,
                                    const TiltParams& tilt, RngStream& arrivals,
                                    RngStream& coins);

// Appends `count` increments sampled from the walk's conditional law given
// the certificate (centered path stays at or below walk.level forever).
void extend_certified_walk(CertifiedWalk& walk, const InterArrivalModel& x,
                           const TiltParams& tilt, std::size_t count,
                           RngStream& arrivals, RngStream& coins);

}  // namespace stablepp
