#pragma once

#include <memory>
#include <vector>

#include "stablepp/rng.hpp"

namespace stablepp {

// Positive inter-arrival time distribution with a light right tail (finite
// moment generating function on a neighbourhood of zero from below).
//
// Every sampling method draws from the stream by inverse transform, so the
// number of uniforms consumed per call is fixed by the call sequence alone,
// never by the values realized.  That property is what makes common-random-
// number coupling and replay audits exact.
class InterArrivalModel {
 public:
  virtual ~InterArrivalModel() = default;

  virtual double mean() const = 0;
  virtual double variance() const = 0;

  // log E[exp(theta X)]; finite for theta < cumulant_domain_sup() (+inf ok).
  virtual double cumulant(double theta) const = 0;
  virtual double cumulant_derivative(double theta) const = 0;
  virtual double cumulant_domain_sup() const = 0;

  virtual double cdf(double x) const = 0;
  virtual double quantile(double p) const = 0;
  virtual double integrated_tail(double x) const = 0;  // E[(X - x)^+]

  virtual double sample(RngStream& rng) const = 0;
  // Density proportional to exp(theta x) g(x); requires theta < domain sup.
  virtual double sample_tilted(RngStream& rng, double theta) const = 0;
  // Stationary forward-recurrence distribution, density P(X > x) / E[X].
  virtual double sample_equilibrium(RngStream& rng) const = 0;
  // Density proportional to x g(x); the spread of the interval straddling a
  // fixed time point in the stationary renewal process.
  virtual double sample_length_biased(RngStream& rng) const = 0;
};

// Nonnegative mark (service time / weight) distribution.  The power-moment
// methods exist because region membership constrains |V|^(1/alpha); the mark
// model itself is alpha-agnostic and is queried with r = 1/alpha.
class MarkModel {
 public:
  virtual ~MarkModel() = default;

  virtual double mean() const = 0;
  virtual double abs_power_mean(double r) const = 0;  // E[|V|^r]

  virtual double cdf(double v) const = 0;
  virtual double quantile(double p) const = 0;
  virtual double tail_prob(double v) const = 0;      // P(|V| > v)
  virtual double quantile_tail(double q) const = 0;  // inverse of tail_prob
  virtual double integrated_tail(double v) const = 0;  // E[(V - v)^+]

  // Upper bound on E[(|V|^r - k)^+], finite and decreasing in k.  Used to cap
  // infinite tail sums; any valid upper bound is correct, tighter is faster.
  virtual double excess_power_bound(double k, double r) const = 0;

  virtual double sample(RngStream& rng) const = 0;
  virtual double sample_abs_le(RngStream& rng, double bound) const = 0;  // |V| <= bound
  virtual double sample_abs_gt(RngStream& rng, double bound) const = 0;  // |V| >  bound
  // Conditional on |V| in (lo, hi]; requires positive probability there.
  virtual double sample_conditional(RngStream& rng, double lo, double hi) const = 0;
};

std::unique_ptr<InterArrivalModel> make_exponential_arrivals(double rate);
std::unique_ptr<InterArrivalModel> make_gamma_arrivals(double shape, double rate);
std::unique_ptr<InterArrivalModel> make_deterministic_arrivals(double value);
std::unique_ptr<InterArrivalModel> make_shifted_exponential_arrivals(double shift,
                                                                     double rate);

std::unique_ptr<MarkModel> make_lognormal_mark(double log_mean, double log_sd);
std::unique_ptr<MarkModel> make_exponential_mark(double rate);
std::unique_ptr<MarkModel> make_gamma_mark(double shape, double rate);
std::unique_ptr<MarkModel> make_uniform_mark(double lo, double hi);
std::unique_ptr<MarkModel> make_discrete_mark(std::vector<double> values,
                                              std::vector<double> probs);

// X = scale * X0 and V = scale * V0.  The wrapper delegates every sample to
// the base model with the identical uniform draws, so two wrappers around one
// base at different scales are perfectly coupled replications.
std::unique_ptr<InterArrivalModel> make_time_scaled(
    std::shared_ptr<const InterArrivalModel> base, double scale);
std::unique_ptr<MarkModel> make_mark_scaled(std::shared_ptr<const MarkModel> base,
                                            double scale);

}  // namespace stablepp
