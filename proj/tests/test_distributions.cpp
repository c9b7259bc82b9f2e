#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "stablepp/distributions.hpp"
#include "stablepp/rng.hpp"
#include "stablepp/special.hpp"

using namespace stablepp;

namespace {

RngStream stream(std::uint64_t rep) { return RngStream(0xD15C0, rep, Purpose::kMarks); }

// One-sample Kolmogorov-Smirnov distance against a cdf callable.
double ks_stat(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return d;
}

template <typename Draw>
double ks_of(std::uint64_t rep, int n, const Draw& draw,
             const std::function<double(double)>& cdf) {
  RngStream s = stream(rep);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = draw(s);
  return ks_stat(std::move(xs), cdf);
}

// ~1e-3 significance for n = 20000; tests are seeded, so outcomes are fixed.
constexpr int kN = 20000;
constexpr double kKsTol = 1.95 / 141.4213562;

}  // namespace

TEST_CASE("exponential arrivals closed forms") {
  auto x = make_exponential_arrivals(1.0);
  CHECK(x->mean() == doctest::Approx(1.0));
  CHECK(x->variance() == doctest::Approx(1.0));
  CHECK(x->cumulant(-1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  CHECK(x->cumulant_derivative(0.0) == doctest::Approx(1.0));
  CHECK(x->cumulant_domain_sup() == doctest::Approx(1.0));
  CHECK(x->integrated_tail(0.0) == doctest::Approx(1.0));
  CHECK(x->integrated_tail(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(x->cdf(x->quantile(0.123)) == doctest::Approx(0.123).epsilon(1e-12));

  auto exp_cdf = [](double t) { return 1.0 - std::exp(-t); };
  CHECK(ks_of(1, kN, [&](RngStream& s) { return x->sample(s); }, exp_cdf) < kKsTol);
  // Memoryless: the stationary recurrence law coincides with the marginal.
  CHECK(ks_of(2, kN, [&](RngStream& s) { return x->sample_equilibrium(s); }, exp_cdf) < kKsTol);
  CHECK(ks_of(3, kN, [&](RngStream& s) { return x->sample_tilted(s, -1.0); },
              [](double t) { return 1.0 - std::exp(-2.0 * t); }) < kKsTol);
  CHECK(ks_of(4, kN, [&](RngStream& s) { return x->sample_length_biased(s); },
              [](double t) { return gamma_p(2.0, t); }) < kKsTol);
}

TEST_CASE("gamma arrivals closed forms and derived laws") {
  auto x = make_gamma_arrivals(2.0, 2.0);
  CHECK(x->mean() == doctest::Approx(1.0));
  CHECK(x->variance() == doctest::Approx(0.5));
  CHECK(x->cumulant(1.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(x->cumulant_derivative(0.0) == doctest::Approx(1.0));
  // Values recorded from numerical quadrature of the tail integral.
  CHECK(x->integrated_tail(1.3) == doctest::Approx(0.1708292298929679).epsilon(1e-12));
  const double f_eq_09 = 1.0 - x->integrated_tail(0.9) / x->mean();
  CHECK(f_eq_09 == doctest::Approx(0.6859321123789857).epsilon(1e-12));

  CHECK(ks_of(5, kN, [&](RngStream& s) { return x->sample(s); },
              [](double t) { return gamma_p(2.0, 2.0 * t); }) < kKsTol);
  CHECK(ks_of(6, kN, [&](RngStream& s) { return x->sample_tilted(s, -1.0); },
              [](double t) { return gamma_p(2.0, 3.0 * t); }) < kKsTol);
  CHECK(ks_of(7, kN, [&](RngStream& s) { return x->sample_length_biased(s); },
              [](double t) { return gamma_p(3.0, 2.0 * t); }) < kKsTol);
  CHECK(ks_of(8, kN, [&](RngStream& s) { return x->sample_equilibrium(s); },
              [&](double t) { return 1.0 - x->integrated_tail(t) / x->mean(); }) < kKsTol);
}

TEST_CASE("deterministic arrivals") {
  auto x = make_deterministic_arrivals(0.7);
  CHECK(x->mean() == doctest::Approx(0.7));
  CHECK(x->variance() == 0.0);
  CHECK(x->cumulant(3.0) == doctest::Approx(2.1));
  CHECK(x->integrated_tail(0.5) == doctest::Approx(0.2));
  CHECK(x->integrated_tail(0.7) == 0.0);
  RngStream s = stream(9);
  CHECK(x->sample(s) == 0.7);
  CHECK(x->sample_tilted(s, 5.0) == 0.7);
  CHECK(ks_of(10, kN, [&](RngStream& s2) { return x->sample_equilibrium(s2); },
              [](double t) { return std::clamp(t / 0.7, 0.0, 1.0); }) < kKsTol);
}

TEST_CASE("shifted exponential arrivals") {
  auto x = make_shifted_exponential_arrivals(0.5, 2.0);
  CHECK(x->mean() == doctest::Approx(1.0));
  CHECK(x->cumulant(1.0) == doctest::Approx(0.5 - std::log(0.5)).epsilon(1e-14));
  CHECK(x->integrated_tail(0.8) == doctest::Approx(0.5 * std::exp(-0.6)).epsilon(1e-14));
  CHECK(x->integrated_tail(0.2) == doctest::Approx(0.8));
  CHECK(x->cdf(x->quantile(0.9)) == doctest::Approx(0.9).epsilon(1e-12));

  auto lb_cdf = [](double t) {
    if (t <= 0.5) return 0.0;
    const double e = std::exp(-2.0 * (t - 0.5));
    return 1.0 - (t + 0.5) * e;
  };
  // Quadrature cross-check of the closed form at one interior point.
  CHECK(lb_cdf(1.2) == doctest::Approx(0.5807851612992689).epsilon(1e-12));
  CHECK(ks_of(11, kN, [&](RngStream& s) { return x->sample_length_biased(s); }, lb_cdf) < kKsTol);
  CHECK(ks_of(12, kN, [&](RngStream& s) { return x->sample_equilibrium(s); },
              [&](double t) { return 1.0 - x->integrated_tail(t) / x->mean(); }) < kKsTol);
}

TEST_CASE("lognormal mark closed forms") {
  auto v = make_lognormal_mark(-0.25, 0.5);
  CHECK(v->mean() == doctest::Approx(0.8824969025845955).epsilon(1e-14));
  CHECK(v->abs_power_mean(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v->tail_prob(1.0) == doctest::Approx(0.308537538725987).epsilon(1e-13));
  // Quadrature references.
  CHECK(v->integrated_tail(0.9) == doctest::Approx(0.16732507079727466).epsilon(1e-12));
  CHECK(v->excess_power_bound(0.8, 2.0) ==
        doctest::Approx(0.45244801863691914).epsilon(1e-9));
  CHECK(v->tail_prob(v->quantile_tail(1e-12)) == doctest::Approx(1e-12).epsilon(1e-6));
  CHECK(v->cdf(v->quantile(0.42)) == doctest::Approx(0.42).epsilon(1e-12));

  CHECK(ks_of(13, kN, [&](RngStream& s) { return v->sample(s); },
              [&](double t) { return v->cdf(t); }) < kKsTol);
  const double t2 = v->tail_prob(2.0);
  CHECK(ks_of(14, kN, [&](RngStream& s) { return v->sample_abs_gt(s, 2.0); },
              [&](double t) { return t <= 2.0 ? 0.0 : (t2 - v->tail_prob(t)) / t2; }) < kKsTol);
  const double lo = v->cdf(0.7), m = v->cdf(1.4) - lo;
  CHECK(ks_of(15, kN, [&](RngStream& s) { return v->sample_conditional(s, 0.7, 1.4); },
              [&](double t) { return std::clamp((v->cdf(t) - lo) / m, 0.0, 1.0); }) < kKsTol);
  CHECK(ks_of(16, kN, [&](RngStream& s) { return v->sample_abs_le(s, 0.9); },
              [&](double t) { return std::clamp(v->cdf(t) / v->cdf(0.9), 0.0, 1.0); }) < kKsTol);
}

TEST_CASE("exponential mark excess moments") {
  auto v = make_exponential_mark(0.7);
  // Exact via incomplete gamma; reference from quadrature.
  CHECK(v->excess_power_bound(0.6, 1.25) ==
        doctest::Approx(1.3023259500991917).epsilon(1e-10));
  CHECK(v->excess_power_bound(2.0, 1.0) ==
        doctest::Approx(std::exp(-1.4) / 0.7).epsilon(1e-12));
  CHECK(v->quantile_tail(1e-14) == doctest::Approx(-std::log(1e-14) / 0.7).epsilon(1e-12));
  CHECK(ks_of(17, kN, [&](RngStream& s) { return v->sample_abs_gt(s, 1.1); },
              [](double t) { return t <= 1.1 ? 0.0 : 1.0 - std::exp(-0.7 * (t - 1.1)); }) < kKsTol);
}

TEST_CASE("gamma mark moments and bounds") {
  auto v = make_gamma_mark(1.5, 0.8);
  CHECK(v->abs_power_mean(0.7) == doctest::Approx(1.4534356830728001).epsilon(1e-12));
  // The excess bound must dominate the quadrature value of the true excess.
  const double truth = 0.6472065613788894;
  CHECK(v->excess_power_bound(0.9, 0.7) >= truth * (1.0 - 1e-12));
  CHECK(v->excess_power_bound(0.9, 0.7) <= v->abs_power_mean(0.7));
  CHECK(v->excess_power_bound(1.2, 1.0) ==
        doctest::Approx(v->integrated_tail(1.2)).epsilon(1e-14));
  CHECK(v->tail_prob(v->quantile_tail(1e-11)) == doctest::Approx(1e-11).epsilon(1e-6));
  CHECK(ks_of(18, kN, [&](RngStream& s) { return v->sample(s); },
              [&](double t) { return v->cdf(t); }) < kKsTol);
}

TEST_CASE("uniform mark") {
  auto v = make_uniform_mark(0.2, 1.7);
  CHECK(v->mean() == doctest::Approx(0.95));
  CHECK(v->abs_power_mean(1.0) == doctest::Approx(0.95).epsilon(1e-13));
  CHECK(v->abs_power_mean(2.0) ==
        doctest::Approx((1.7 * 1.7 * 1.7 - 0.008) / (1.5 * 3.0)).epsilon(1e-13));
  CHECK(v->integrated_tail(1.0) == doctest::Approx(0.49 / 3.0).epsilon(1e-13));
  CHECK(v->excess_power_bound(0.0, 1.0) == doctest::Approx(0.95).epsilon(1e-13));
  // E[(V - 1)^+] equals the r = 1 excess bound at k = 1 exactly.
  CHECK(v->excess_power_bound(1.0, 1.0) ==
        doctest::Approx(v->integrated_tail(1.0)).epsilon(1e-12));
  CHECK(ks_of(19, kN, [&](RngStream& s) { return v->sample_conditional(s, 0.5, 1.1); },
              [](double t) { return std::clamp((t - 0.5) / 0.6, 0.0, 1.0); }) < kKsTol);
}

TEST_CASE("discrete mark enumerates exactly") {
  auto v = make_discrete_mark({1.5, 0.5, 2.5}, {0.5, 0.2, 0.3});  // unsorted on purpose
  CHECK(v->mean() == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(v->cdf(0.5) == doctest::Approx(0.2));
  CHECK(v->cdf(1.49) == doctest::Approx(0.2));
  CHECK(v->tail_prob(1.5) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(v->quantile(0.19) == 0.5);
  CHECK(v->quantile(0.21) == 1.5);
  CHECK(v->quantile_tail(0.29) == 2.5);
  CHECK(v->quantile_tail(0.31) == 1.5);
  CHECK(v->integrated_tail(1.0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(v->excess_power_bound(1.0, 2.0) == doctest::Approx(2.2).epsilon(1e-13));

  RngStream s = stream(20);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 30000; ++i) {
    const double d = v->sample(s);
    ++counts[d < 1.0 ? 0 : (d < 2.0 ? 1 : 2)];
  }
  const double e[3] = {6000, 15000, 9000};
  double chi2 = 0.0;
  for (int i = 0; i < 3; ++i) chi2 += (counts[i] - e[i]) * (counts[i] - e[i]) / e[i];
  CHECK(chi2 < 18.0);  // df = 2

  for (int i = 0; i < 50; ++i) {
    CHECK(v->sample_conditional(s, 0.6, 2.0) == 1.5);
    CHECK(v->sample_abs_gt(s, 1.5) == 2.5);
    CHECK(v->sample_abs_le(s, 0.5) == 0.5);
  }
  CHECK_THROWS(v->sample_conditional(s, 2.6, 9.0));
  CHECK_THROWS(make_discrete_mark({1.0}, {0.5}));
}

TEST_CASE("time scaled arrivals delegate with identical draws") {
  std::shared_ptr<const InterArrivalModel> base = make_gamma_arrivals(2.0, 2.0);
  auto scaled = make_time_scaled(base, 0.25);
  CHECK(scaled->mean() == doctest::Approx(0.25));
  CHECK(scaled->cumulant_domain_sup() == doctest::Approx(8.0));
  CHECK(scaled->cumulant(4.0) == doctest::Approx(base->cumulant(1.0)).epsilon(1e-14));
  CHECK(scaled->integrated_tail(0.25) ==
        doctest::Approx(0.25 * base->integrated_tail(1.0)).epsilon(1e-14));

  RngStream s1 = stream(21), s2 = stream(21);
  for (int i = 0; i < 100; ++i) {
    CHECK(scaled->sample(s1) == doctest::Approx(0.25 * base->sample(s2)).epsilon(1e-15));
  }
  CHECK(s1.draws() == s2.draws());
  RngStream t1 = stream(22), t2 = stream(22);
  for (int i = 0; i < 20; ++i) {
    // Tilting the scaled variable by theta tilts the base by c*theta.
    CHECK(scaled->sample_tilted(t1, -2.0) ==
          doctest::Approx(0.25 * base->sample_tilted(t2, -0.5)).epsilon(1e-15));
  }
}

TEST_CASE("scaled lognormal mark equals shifted parameterization") {
  std::shared_ptr<const MarkModel> base = make_lognormal_mark(-0.25, 0.5);
  auto scaled = make_mark_scaled(base, 2.0);
  auto direct = make_lognormal_mark(-0.25 + std::log(2.0), 0.5);
  for (double v : {0.3, 0.9, 1.7, 4.2}) {
    CHECK(scaled->tail_prob(v) == doctest::Approx(direct->tail_prob(v)).epsilon(1e-13));
    CHECK(scaled->integrated_tail(v) ==
          doctest::Approx(direct->integrated_tail(v)).epsilon(1e-12));
  }
  for (double p : {0.05, 0.5, 0.95}) {
    CHECK(scaled->quantile(p) == doctest::Approx(direct->quantile(p)).epsilon(1e-13));
  }
  CHECK(scaled->excess_power_bound(0.8, 2.0) ==
        doctest::Approx(direct->excess_power_bound(0.8, 2.0)).epsilon(1e-12));
  RngStream s1 = stream(23), s2 = stream(23);
  for (int i = 0; i < 100; ++i) {
    CHECK(scaled->sample(s1) == doctest::Approx(2.0 * base->sample(s2)).epsilon(1e-15));
  }
}
