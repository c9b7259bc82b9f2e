#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace stablepp {

// Compensated accumulator.  Within one fixed addition order the rounding
// error stays O(1) ulp regardless of length, which keeps replication
// aggregates reproducible to ~1e-16 relative across refactors of the loop
// body (the documented reproducibility budget is 1e-9 relative).
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Sample mean and its standard error (sd / sqrt(n)).
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};
MeanSe mean_and_se(const std::vector<double>& xs);

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov
// ---------------------------------------------------------------------------

// Survival function of the Kolmogorov distribution,
// Q(x) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_sf(double x);

// One-sample statistic sup_x |F_n(x) - F(x)| against a continuous null CDF.
double ks_statistic(std::vector<double> xs,
                    const std::function<double(double)>& cdf);

// Asymptotic p-value with the Stephens finite-sample adjustment
// p = Q(D * (sqrt(n) + 0.12 + 0.11 / sqrt(n))).
double ks_p_value(double statistic, std::size_t n);

// Two-sample statistic sup_x |F_a(x) - F_b(x)| and its asymptotic p-value
// (Stephens adjustment at the effective size n*m/(n+m)).
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);
double ks_two_sample_p_value(double statistic, std::size_t n, std::size_t m);

// ---------------------------------------------------------------------------
// Chi-square
// ---------------------------------------------------------------------------

// P(Chi2_dof > x).
double chi2_sf(double x, double dof);

struct Chi2Result {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t cells = 0;  // after merging
};

// Goodness of fit of nonnegative-integer observations against a discrete
// null pmf on {0, 1, 2, ...}.  Cells run from 0 to the largest observation,
// with all remaining tail mass folded into the last cell; adjacent cells are
// merged left to right until every expected count reaches min_expected.
// dof = cells - 1 - estimated_params.
Chi2Result chi2_discrete_gof(const std::vector<std::size_t>& observations,
                             const std::function<double(std::size_t)>& pmf,
                             std::size_t estimated_params = 0,
                             double min_expected = 5.0);

// Homogeneity test for two integer samples (contingency 2 x cells, expected
// counts from pooled proportions, adjacent cells merged until every expected
// count reaches min_expected).  dof = cells - 1.
Chi2Result chi2_two_sample(const std::vector<std::size_t>& a,
                           const std::vector<std::size_t>& b,
                           double min_expected = 5.0);

// Poisson pmf, stable for large mean (log-space evaluation).
double poisson_pmf(std::size_t k, double mean);

}  // namespace stablepp
