#include "stablepp/arrival_sequence.hpp"

#include <algorithm>
#include <stdexcept>

namespace stablepp {

// Re-checks the growth certificate on epochs [from, size): A_{n+1} >= n*slope
// for n >= kappa.  A violation means a bug upstream, so fail loudly.
void assert_arrival_certificate(const ArrivalBlock& b, std::size_t from) {
  for (std::size_t i = std::max(from, b.kappa); i < b.epochs.size(); ++i) {
    // epochs[i] = A_{i+1}; certificate at n = i.
    const double bound = static_cast<double>(i) * b.slope;
    if (b.epochs[i] < bound - 1e-9 * (1.0 + bound)) {
      throw std::logic_error("arrival block violates its growth certificate");
    }
  }
}

namespace {

void append_from_walk(ArrivalBlock& b, std::size_t old_gap_count) {
  for (std::size_t i = old_gap_count; i < b.walk.xs.size(); ++i) {
    b.epochs.push_back(b.epochs.back() + b.walk.xs[i]);
  }
}

}  // namespace

ArrivalBlock sample_arrivals(const InterArrivalModel& x, const TiltParams& tilt,
                             RngStream& arrivals, RngStream& coins,
                             std::optional<double> first_epoch) {
  ArrivalBlock b;
  b.slope = tilt.slope;
  const double a1 = first_epoch ? *first_epoch : x.sample_equilibrium(arrivals);
  if (!(a1 >= 0.0)) {
    throw std::invalid_argument("sample_arrivals: first epoch must be >= 0");
  }
  // The gap walk certifies sum_{i<=n} X_{1+i} >= n*slope strictly beyond its
  // last-passage index (the bound can fail AT that index), and adding the
  // nonnegative A_1 preserves it; hence the block certificate starts one past.
  b.walk = sample_certified_walk(x, tilt, arrivals, coins);
  b.kappa = b.walk.kappa == 0 ? 0 : b.walk.kappa + 1;
  b.epochs.push_back(a1);
  append_from_walk(b, 0);
  assert_arrival_certificate(b, 0);
  return b;
}

void ensure_epochs(ArrivalBlock& block, const InterArrivalModel& x,
                   const TiltParams& tilt, std::size_t count,
                   RngStream& arrivals, RngStream& coins) {
  if (block.epochs.size() >= count) return;
  const std::size_t old_epochs = block.epochs.size();
  const std::size_t old_gaps = block.walk.xs.size();
  extend_certified_walk(block.walk, x, tilt, count - block.epochs.size(),
                        arrivals, coins);
  append_from_walk(block, old_gaps);
  assert_arrival_certificate(block, old_epochs);
}

}  // namespace stablepp
