#pragma once

#include <functional>

namespace stablepp {

// Standard normal CDF and its inverse, accurate in both tails.
double norm_cdf(double x);
double norm_quantile(double p);

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x) and the inverses of
// each in x for fixed shape a (the Q inverse is stable for tiny tail mass).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
double gamma_p_inv(double a, double p);
double gamma_q_inv(double a, double q);

// Solves cdf(x) = p for a nondecreasing cdf by bisection on [lo, hi].
// Requires cdf(lo) <= p <= cdf(hi); refines until the bracket width is below
// x_tol or the cdf gap is below 1e-12.
double invert_cdf(const std::function<double(double)>& cdf, double p,
                  double lo, double hi, double x_tol = 1e-13);

}  // namespace stablepp
