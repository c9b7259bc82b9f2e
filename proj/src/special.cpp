#include "stablepp/special.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace stablepp {

double norm_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("norm_quantile: p must lie in (0,1)");
  }
  // Phi^{-1}(p) = -sqrt(2) erfc^{-1}(2p); erfc_inv is stable in both tails.
  return -1.4142135623730950488 * boost::math::erfc_inv(2.0 * p);
}

double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

double gamma_p_inv(double a, double p) { return boost::math::gamma_p_inv(a, p); }

double gamma_q_inv(double a, double q) { return boost::math::gamma_q_inv(a, q); }

double invert_cdf(const std::function<double(double)>& cdf, double p,
                  double lo, double hi, double x_tol) {
  if (!(cdf(lo) <= p && p <= cdf(hi))) {
    throw std::domain_error("invert_cdf: p not bracketed by [cdf(lo), cdf(hi)]");
  }
  for (int i = 0; i < 200 && hi - lo > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = cdf(mid);
    if (std::abs(f - p) < 1e-12) return mid;
    (f < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace stablepp
