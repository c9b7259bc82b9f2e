#pragma once

#include <cstddef>
#include <vector>

#include "stablepp/distributions.hpp"
#include "stablepp/rng.hpp"

namespace stablepp {

// Options controlling mark-sequence generation.  The default configuration is
// the exact sampler; the knobs below deliberately break exactness and exist
// only so the validation battery can prove it would catch such a bug.
struct MarkOptions {
  // Fault injection: draw the marks between and beyond exceedance slots from
  // the plain mark law instead of conditioning them to stay at or below the
  // slot threshold.  Never enable outside validation runs.
  bool nominal_fill = false;
};

// An i.i.d. mark sequence V_1, V_2, ... materialized together with a finite
// certificate index.  Slot n (n >= 1) carries threshold (n * slope)^alpha and
// refers to mark V_{n+1}; an "exceedance slot" is one where |V_{n+1}| strictly
// exceeds its threshold.  The block certifies:
//
//   for every n >= kappa:  |V_{n+1}| <= (n * slope)^alpha,
//
// which holds because the construction has provably revealed the last
// exceedance slot (kappa - 1, or none when kappa == 1).  marks[i] stores
// V_{i+1}; immediately after sampling, marks.size() == kappa + 1 (the block
// closes with the first certified fill V_{kappa+1}).  Marks appended later
// (ensure_marks) are conditioned at or below their slot thresholds, so the
// certificate stays valid for every materialized mark.
struct MarkBlock {
  std::vector<double> marks;               // V_1 .. V_M (absolute values used
                                           // against thresholds; models here
                                           // produce nonnegative marks)
  std::vector<std::size_t> exceed_slots;   // strictly increasing, all < kappa
  std::size_t kappa = 1;
  double slope = 0.0;
  double alpha = 1.0;
};

// P(|V| > (slot * slope)^alpha): probability that the mark at slot `slot`
// strictly exceeds its threshold.
double exceed_prob(const MarkModel& mark, double slope, double alpha,
                   std::size_t slot);

// Exact coin for the event "no slot after `after_slot` is an exceedance
// slot", i.e. success probability  prod_{n > after_slot} (1 - p(n))  where
// p(n) = exceed_prob(n).  Decided with one uniform via converging certified
// upper/lower bounds on the infinite product; never truncates.
bool no_future_exceedance(const MarkModel& mark, double slope, double alpha,
                          std::size_t after_slot, RngStream& rng);

// Exact sample of the next exceedance slot after `after_slot`, conditional on
// at least one existing.  Law: P(slot = n) proportional to
// p(n) * prod_{after_slot < j < n} (1 - p(j)).  Implemented as an inverse
// transform proposal (mass proportional to p(n), normalizer certified by
// converging bounds) thinned by the no-earlier-exceedance product.
// Precondition: the exceedance-slot tail after `after_slot` has positive
// mass; calling this when no_future_exceedance is certain does not terminate.
std::size_t next_exceedance_slot(const MarkModel& mark, double slope,
                                 double alpha, std::size_t after_slot,
                                 RngStream& rng);

// Samples the mark sequence jointly with its certificate index.  V_1 is drawn
// from the plain mark law (slot 0 carries no constraint used downstream);
// exceedance slots are revealed one at a time (next_exceedance_slot) until
// no_future_exceedance succeeds; marks at exceedance slots are conditioned
// strictly above their thresholds, all other materialized marks at or below
// theirs.  The returned block carries V_1 .. V_{kappa+1}.  Marginally the
// sequence is exactly i.i.d. from `mark`.
MarkBlock sample_marks(const MarkModel& mark, double slope, double alpha,
                       RngStream& rng, const MarkOptions& options = {});

// Extends the block until at least `count` marks are materialized.  Every
// appended mark sits at a slot >= kappa and is drawn conditioned at or below
// its slot threshold (unless options.nominal_fill).
void ensure_marks(MarkBlock& block, const MarkModel& mark, std::size_t count,
                  RngStream& rng, const MarkOptions& options = {});

// Verifies the structural contract of a block built without fault injection:
// exceedance-slot marks strictly above their thresholds, every other slot-n
// mark (n >= 1) at or below, exceed_slots strictly increasing and consistent
// with kappa.  Throws std::logic_error on violation.  `from_slot` skips slots
// already verified.
void assert_mark_certificate(const MarkBlock& block, std::size_t from_slot = 1);

}  // namespace stablepp
