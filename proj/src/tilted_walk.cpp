#include "stablepp/tilted_walk.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stablepp/errors.hpp"

namespace stablepp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kStepCeiling = 1'000'000'000;

double step_cumulant(const InterArrivalModel& x, double slope, double theta) {
  return theta * slope + x.cumulant(-theta);
}

}  // namespace

TiltParams resolve_tilt(const InterArrivalModel& x, double epsilon) {
  const double mu = x.mean();
  if (!(epsilon > 0.0) || !(epsilon < mu)) {
    throw std::invalid_argument("resolve_tilt: epsilon must lie in (0, mean)");
  }
  TiltParams t;
  t.epsilon = epsilon;
  t.slope = mu - epsilon;

  // X >= slope almost surely: the centered walk is monotone nonincreasing, no
  // passage coin can ever succeed and no change of measure is needed.
  if (x.cdf(t.slope * (1.0 - 1e-12)) <= 0.0 && x.cdf(t.slope) <= 0.0) {
    t.eta = kInf;
    t.tilted_drift = -epsilon;
    return t;
  }

  // psi(theta) = theta*slope + cumulant_X(-theta) is convex with psi(0) = 0
  // and negative slope -epsilon at 0; bracket the second zero by doubling.
  double hi = 1.0;
  int grow = 0;
  while (step_cumulant(x, t.slope, hi) <= 0.0) {
    hi *= 2.0;
    if (++grow > 200) {
      throw NoTiltRootError("resolve_tilt: no positive cumulant root found");
    }
  }
  double lo = hi * 0.5;
  if (step_cumulant(x, t.slope, lo) > 0.0) lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = step_cumulant(x, t.slope, mid);
    if (std::abs(f) <= 1e-13) {
      lo = hi = mid;
      break;
    }
    (f < 0.0 ? lo : hi) = mid;
  }
  t.eta = 0.5 * (lo + hi);
  if (!(t.eta > 0.0) || std::abs(step_cumulant(x, t.slope, t.eta)) > 1e-10) {
    throw NoTiltRootError("resolve_tilt: cumulant root did not converge");
  }
  t.tilted_drift = t.slope - x.cumulant_derivative(-t.eta);
  if (!(t.tilted_drift > 0.0)) {
    throw NoTiltRootError("resolve_tilt: tilted drift is not positive");
  }
  return t;
}

TiltParams resolve_tilt_auto(const InterArrivalModel& x) {
  double epsilon = 0.5 * x.mean();
  for (int attempt = 0;; ++attempt) {
    try {
      return resolve_tilt(x, epsilon);
    } catch (const NoTiltRootError&) {
      if (attempt >= 6) throw;
      epsilon *= 0.5;
    }
  }
}

PassageAttempt sample_passage_coin(const InterArrivalModel& x,
                                   const TiltParams& tilt, double xi,
                                   RngStream& coins) {
  PassageAttempt out;
  if (!(xi >= 0.0)) throw std::invalid_argument("sample_passage_coin: xi < 0");
  if (tilt.eta == kInf) return out;  // upcrossing impossible

  // Proposal: walk under the tilted measure (positive drift) to first passage
  // above xi; accept with the likelihood ratio exp(-eta * overshoot_sum),
  // which is exactly P(sup > xi) when averaged over proposals.
  double s = 0.0;
  std::vector<double> xs;
  for (std::uint64_t n = 0;; ++n) {
    if (n >= kStepCeiling) {
      throw SimulationLimitError("sample_passage_coin: proposal exceeded step ceiling");
    }
    const double xi_step = x.sample_tilted(coins, -tilt.eta);
    xs.push_back(xi_step);
    s += tilt.slope - xi_step;
    if (s > xi) break;
  }
  if (coins.next_double() <= std::exp(-tilt.eta * s)) {
    out.crossed = true;
    out.xs = std::move(xs);
  }
  return out;
}

CertifiedWalk sample_certified_walk(const InterArrivalModel& x,
                                    const TiltParams& tilt, RngStream& arrivals,
                                    RngStream& coins) {
  CertifiedWalk w;
  std::size_t last_positive = 0;  // 0 means "never above 0"
  for (;;) {
    // Invariant: w.position <= 0 here.
    ++w.coin_flips;
    PassageAttempt attempt = sample_passage_coin(x, tilt, 0.0, coins);
    if (!attempt.crossed) {
      w.level = w.position;
      w.kappa = last_positive;
      return w;
    }
    for (double xv : attempt.xs) {
      w.xs.push_back(xv);
      w.position += tilt.slope - xv;
      if (w.position > 0.0) last_positive = w.xs.size();
    }
    // Nominal descent back to the certificate level.
    while (w.position > 0.0) {
      if (w.xs.size() >= kStepCeiling) {
        throw SimulationLimitError("sample_certified_walk: descent exceeded step ceiling");
      }
      const double xv = x.sample(arrivals);
      w.xs.push_back(xv);
      w.position += tilt.slope - xv;
      if (w.position > 0.0) last_positive = w.xs.size();
    }
  }
}

void extend_certified_walk(CertifiedWalk& walk, const InterArrivalModel& x,
                           const TiltParams& tilt, std::size_t count,
                           RngStream& arrivals, RngStream& coins) {
  if (count == 0) return;
  const double slack = walk.level - walk.position;
  std::vector<double> seg(count);
  for (std::uint64_t tries = 0;; ++tries) {
    if (tries >= kStepCeiling) {
      throw SimulationLimitError("extend_certified_walk: retry ceiling reached");
    }
    double s = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < count; ++i) {
      seg[i] = x.sample(arrivals);
      s += tilt.slope - seg[i];
      if (s > slack) ok = false;  // keep drawing: fixed consumption per try
    }
    if (!ok) continue;
    // The unseen tail must also respect the ceiling: demand a failed coin.
    ++walk.coin_flips;
    if (!sample_passage_coin(x, tilt, slack - s, coins).crossed) {
      for (double xv : seg) {
        walk.xs.push_back(xv);
        walk.position += tilt.slope - xv;
      }
      return;
    }
  }
}

}  // namespace stablepp
