// Acceptance gate: runs every top-level criterion end to end and prints one
// [PASS]/[FAIL] line per criterion.  Exit status equals the number of
// failing criteria.  Statistical checks run at the stated tolerances with a
// fixed seed, so the outcome is reproducible bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stablepp/distributions.hpp"
#include "stablepp/harness.hpp"
#include "stablepp/infinite_server.hpp"
#include "stablepp/mark_sequence.hpp"
#include "stablepp/parallel.hpp"
#include "stablepp/rng.hpp"
#include "stablepp/stats.hpp"
#include "stablepp/tilted_walk.hpp"

using namespace stablepp;

namespace {

constexpr std::uint64_t kSeed = 0xC0FFEE5EED;
// Stationary mean occupancy at lambda=100 with Lognormal(-0.25, 0.5)
// services: 100 * exp(-0.25 + 0.5^2/2) = 100 * exp(-0.125).
constexpr double kTrueMean = 88.24969025845953;

int g_failures = 0;

std::string strf(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[1024];
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return std::string(buf);
}

void report(int k, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", k,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

ScaledSystem lognormal_system(double lambda) {
  return make_system(
      std::shared_ptr<const InterArrivalModel>(make_exponential_arrivals(1.0)),
      std::shared_ptr<const MarkModel>(make_lognormal_mark(-0.25, 0.5)),
      lambda, 1.0, 0.5);
}

ScaledSystem markov_system(double lambda, double nu = 1.0) {
  return make_system(
      std::shared_ptr<const InterArrivalModel>(make_exponential_arrivals(1.0)),
      std::shared_ptr<const MarkModel>(make_exponential_mark(1.0)), lambda, nu,
      0.5);
}

// ---------------------------------------------------------------------------
// Criteria 1-3: one batch of exact stationary draws at lambda = 100.
// ---------------------------------------------------------------------------

struct StationaryDraw {
  std::size_t occupancy = 0;
  std::size_t arrivals = 0;
  std::vector<double> residuals;
};

double run_criteria_1_2_3() {
  const std::size_t reps = 10000;
  const ScaledSystem system = lognormal_system(100.0);
  const auto draws =
      run_replications(reps, [&](std::size_t r) {
        const QueueState s =
            sample_stationary_queue(system, kSeed, static_cast<std::uint64_t>(r));
        StationaryDraw d;
        d.occupancy = s.occupancy();
        d.arrivals = s.arrivals_simulated;
        d.residuals.reserve(s.customers.size());
        for (const Customer& c : s.customers) d.residuals.push_back(c.residual);
        return d;
      });

  std::vector<std::size_t> occupancy;
  std::vector<double> residuals;
  KahanSum arrivals_sum;
  occupancy.reserve(reps);
  for (const StationaryDraw& d : draws) {
    occupancy.push_back(d.occupancy);
    arrivals_sum.add(static_cast<double>(d.arrivals));
    residuals.insert(residuals.end(), d.residuals.begin(), d.residuals.end());
  }

  // Criterion 1: mean within 4 SE of the closed form, Poisson chi-square.
  KahanSum occ_sum;
  for (std::size_t q : occupancy) occ_sum.add(static_cast<double>(q));
  const double mean_q = occ_sum.value() / static_cast<double>(reps);
  const Chi2Result chi2 = chi2_discrete_gof(
      occupancy, [](std::size_t k) { return poisson_pmf(k, kTrueMean); }, 0);
  const bool pass_mean = std::fabs(mean_q - kTrueMean) <= 0.38;
  const bool pass_chi2 = chi2.p_value > 0.01;
  report(1, pass_mean && pass_chi2,
         strf("stationary mean %.4f vs %.4f (tolerance 0.38, diff %.4f); "
              "Poisson chi2 p=%.4f over %zu cells (needs > 0.01)",
              mean_q, kTrueMean, std::fabs(mean_q - kTrueMean), chi2.p_value,
              chi2.cells));

  // Criterion 2: pooled residuals against the lognormal equilibrium law.
  const MarkModel& mark = *system.mark;
  const double mean_service = mark.mean();
  const double ks = ks_statistic(residuals, [&](double r) {
    return r <= 0.0 ? 0.0 : 1.0 - mark.integrated_tail(r) / mean_service;
  });
  const double ks_p = ks_p_value(ks, residuals.size());
  report(2, ks_p > 0.01,
         strf("equilibrium-residual KS D=%.5f over %zu pooled residuals, "
              "p=%.4f (needs > 0.01)",
              ks, residuals.size(), ks_p));

  // Criterion 3: mean arrivals consumed per replication within 5%.
  const double mean_arrivals = arrivals_sum.value() / static_cast<double>(reps);
  const bool pass_arrivals =
      mean_arrivals >= 592.6369 * 0.95 && mean_arrivals <= 592.6369 * 1.05;
  report(3, pass_arrivals,
         strf("mean arrivals per replication %.2f vs 592.64 (+-5%% -> "
              "[%.1f, %.1f])",
              mean_arrivals, 592.6369 * 0.95, 592.6369 * 1.05));
  return mean_arrivals;
}

// ---------------------------------------------------------------------------
// Criterion 4: empty-start bias curve at lambda = 100.
// ---------------------------------------------------------------------------

void run_criterion_4() {
  const std::size_t reps = 10000;
  const std::vector<std::size_t> horizons = {600, 1000, 5000};
  const double reference[3] = {0.1026, 0.0571, 0.0117};
  const ScaledSystem system = lognormal_system(100.0);

  const auto paths = run_replications(reps, [&](std::size_t r) {
    return transient_checkpoint_averages(system, horizons, std::nullopt,
                                         kSeed + 1,
                                         static_cast<std::uint64_t>(r));
  });

  std::string detail;
  bool all = true;
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    std::vector<double> avg(reps);
    for (std::size_t r = 0; r < reps; ++r) avg[r] = paths[r][j];
    const MeanSe m = mean_and_se(avg);
    const double rel_bias = (kTrueMean - m.mean) / kTrueMean;
    const double rel_se = m.se / kTrueMean;
    // The reference values are themselves Monte Carlo estimates from the
    // same replication count, so the bracket uses the combined uncertainty.
    const double combined = std::sqrt(2.0) * rel_se;
    const bool ok = std::fabs(rel_bias - reference[j]) <= 4.0 * combined;
    all = all && ok;
    detail += strf("%sn=%zu: bias %.3f%% vs %.2f%% (4 combined SE = %.3f%%)%s",
                   j ? "; " : "", horizons[j], 100.0 * rel_bias,
                   100.0 * reference[j], 400.0 * combined, ok ? "" : " [off]");
  }
  report(4, all, detail);
}

// ---------------------------------------------------------------------------
// Criterion 5: equal-budget comparison, 50 meta-replications.
// ---------------------------------------------------------------------------

void run_criterion_5(double mean_arrivals) {
  const std::size_t metas = 50;
  const std::size_t pairs_per_meta = 64;  // averaging sharpens each meta-run
  const std::size_t budget = 10000;
  const auto consumed =
      static_cast<std::size_t>(std::llround(mean_arrivals));
  const std::size_t exact_budget = budget - consumed;
  const ScaledSystem system = lognormal_system(100.0);

  const std::size_t total = metas * pairs_per_meta;
  const auto pair_avgs = run_replications(total, [&](std::size_t idx) {
    const auto empty_rep = static_cast<std::uint64_t>(2 * idx);
    const auto exact_rep = static_cast<std::uint64_t>(2 * idx + 1);
    const double empty_avg =
        transient_checkpoint_averages(system, {budget}, std::nullopt,
                                      kSeed + 2, empty_rep)[0];
    QueueState start = sample_stationary_queue(system, kSeed + 2, exact_rep);
    const double exact_avg = transient_checkpoint_averages(
        system, {exact_budget}, std::optional<QueueState>(std::move(start)),
        kSeed + 2, exact_rep)[0];
    return std::pair<double, double>(empty_avg, exact_avg);
  });

  std::size_t exact_wins = 0;
  for (std::size_t m = 0; m < metas; ++m) {
    KahanSum empty_sum, exact_sum;
    for (std::size_t k = 0; k < pairs_per_meta; ++k) {
      empty_sum.add(pair_avgs[m * pairs_per_meta + k].first);
      exact_sum.add(pair_avgs[m * pairs_per_meta + k].second);
    }
    const double empty_err =
        std::fabs(empty_sum.value() / pairs_per_meta - kTrueMean);
    const double exact_err =
        std::fabs(exact_sum.value() / pairs_per_meta - kTrueMean);
    if (exact_err < empty_err) ++exact_wins;
  }
  report(5, exact_wins * 10 >= metas * 9,
         strf("exact start (n'=%zu) beat empty start (n=%zu) in %zu/%zu "
              "meta-replications of %zu averaged pairs (needs >= 45)",
              exact_budget, budget, exact_wins, metas, pairs_per_meta));
}

// ---------------------------------------------------------------------------
// Criterion 6: sensitivity table, Gamma(2,2) arrivals / Lognormal services.
// ---------------------------------------------------------------------------

void run_criterion_6() {
  const std::size_t reps = 2000;
  const double lambdas[3] = {80.0, 100.0, 120.0};
  // Reference derivative table at (lambda, 1):
  //   d/dlambda mean-residual, d/dnu mean-residual,
  //   d/dlambda max-residual,  d/dnu max-residual.
  const double table[3][4] = {
      {7.0741e-3, -1.1320, 6.1022e-3, -2.8389},
      {5.6470e-3, -1.1316, 4.9379e-3, -2.9495},
      {4.7236e-3, -1.1337, 4.2337e-3, -3.0684},
  };

  const auto base_x = std::shared_ptr<const InterArrivalModel>(
      make_gamma_arrivals(2.0, 2.0));
  const auto base_v =
      std::shared_ptr<const MarkModel>(make_lognormal_mark(-0.25, 0.5));

  bool all = true;
  std::string detail;
  for (int c = 0; c < 3; ++c) {
    const ScaledSystem system =
        make_system(base_x, base_v, lambdas[c], 1.0, 0.5);
    const SensitivityEstimate est = ipa_sensitivities(
        system, kSeed + 3, reps);
    const DerivativeEstimate vals[4] = {
        est.d_lambda_mean_residual, est.d_nu_mean_residual,
        est.d_lambda_max_residual, est.d_nu_max_residual};
    int misses = 0;
    double worst_z = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double z = std::fabs(vals[j].value - table[c][j]) / vals[j].se;
      worst_z = std::max(worst_z, z);
      if (z > 3.0) ++misses;
    }
    all = all && misses == 0;
    detail += strf("%slambda=%g: worst |z|=%.2f%s", c ? "; " : "", lambdas[c],
                   worst_z, misses ? strf(" (%d/4 off)", misses).c_str() : "");
  }
  report(6, all,
         "12 reference derivatives within 3 estimated SE -- " + detail);
}

// ---------------------------------------------------------------------------
// Criterion 7: IPA vs common-random-number central finite differences.
// ---------------------------------------------------------------------------

void run_criterion_7() {
  const std::size_t reps = 10000;
  const double lambda = 5.0, nu = 1.0, rel_step = 0.05;
  const double hl = rel_step * lambda, hn = rel_step * nu;

  const SensitivityEstimate ipa =
      ipa_sensitivities(markov_system(lambda, nu), kSeed + 4, reps);

  // Four perturbed systems sharing replication-keyed streams (CRN).
  const ScaledSystem lp = markov_system(lambda + hl, nu);
  const ScaledSystem lm = markov_system(lambda - hl, nu);
  const ScaledSystem np = markov_system(lambda, nu + hn);
  const ScaledSystem nm = markov_system(lambda, nu - hn);
  struct Quad {
    SensitivitySample lp, lm, np, nm;
  };
  const auto quads = run_replications(reps, [&](std::size_t r) {
    const auto rep = static_cast<std::uint64_t>(r);
    Quad q;
    q.lp = sensitivity_sample(sample_stationary_queue(lp, kSeed + 4, rep));
    q.lm = sensitivity_sample(sample_stationary_queue(lm, kSeed + 4, rep));
    q.np = sensitivity_sample(sample_stationary_queue(np, kSeed + 4, rep));
    q.nm = sensitivity_sample(sample_stationary_queue(nm, kSeed + 4, rep));
    return q;
  });

  // Central differences: the mean-residual functional conditions on a
  // non-empty system, so those pairs keep only replications where both
  // perturbed draws are occupied; the max-residual functional is 0 when
  // empty and needs no exclusion.
  std::vector<double> dl_mean, dn_mean, dl_max, dn_max;
  for (const Quad& q : quads) {
    if (!q.lp.empty && !q.lm.empty) {
      dl_mean.push_back((q.lp.mean_residual - q.lm.mean_residual) / (2 * hl));
    }
    if (!q.np.empty && !q.nm.empty) {
      dn_mean.push_back((q.np.mean_residual - q.nm.mean_residual) / (2 * hn));
    }
    dl_max.push_back((q.lp.max_residual - q.lm.max_residual) / (2 * hl));
    dn_max.push_back((q.np.max_residual - q.nm.max_residual) / (2 * hn));
  }

  struct Check {
    const char* name;
    DerivativeEstimate ipa;
    MeanSe fd;
  };
  const Check checks[4] = {
      {"d_lambda mean-residual", ipa.d_lambda_mean_residual,
       mean_and_se(dl_mean)},
      {"d_nu mean-residual", ipa.d_nu_mean_residual, mean_and_se(dn_mean)},
      {"d_lambda max-residual", ipa.d_lambda_max_residual,
       mean_and_se(dl_max)},
      {"d_nu max-residual", ipa.d_nu_max_residual, mean_and_se(dn_max)},
  };
  bool all = true;
  std::string detail;
  for (int j = 0; j < 4; ++j) {
    const double gap = std::fabs(checks[j].ipa.value - checks[j].fd.mean);
    const double band =
        3.0 * std::sqrt(checks[j].ipa.se * checks[j].ipa.se +
                        checks[j].fd.se * checks[j].fd.se);
    const bool ok = gap <= band;
    all = all && ok;
    detail += strf("%s%s: IPA %.4f vs FD %.4f (3 SE band %.4f)%s",
                   j ? "; " : "", checks[j].name, checks[j].ipa.value,
                   checks[j].fd.mean, band, ok ? "" : " [off]");
  }
  report(7, all, detail);
}

// ---------------------------------------------------------------------------
// Criterion 8: M/M/infinity oracle equivalence.
// ---------------------------------------------------------------------------

void run_criterion_8() {
  const std::size_t reps = 4000;
  const double lambda = 10.0;
  const ScaledSystem system = markov_system(lambda);

  // Exact sampler side.
  struct Draw {
    std::size_t occupancy;
    std::vector<double> residuals;
  };
  const auto exact = run_replications(reps, [&](std::size_t r) {
    const QueueState s =
        sample_stationary_queue(system, kSeed + 5, static_cast<std::uint64_t>(r));
    Draw d{s.occupancy(), {}};
    for (const Customer& c : s.customers) d.residuals.push_back(c.residual);
    return d;
  });

  // Brute-force oracle: a Poisson(lambda) arrival stream on (0, T] observed
  // at T = 50 mean service times; a customer is present iff its arrival time
  // plus service exceeds T.  This uses only the distribution primitives --
  // none of the certificate machinery.
  const double horizon = 50.0 * system.mark->mean();
  const auto forward = run_replications(reps, [&](std::size_t r) {
    RngStream rng(kSeed + 6, static_cast<std::uint64_t>(r),
                  Purpose::kTransient);
    Draw d{0, {}};
    double t = system.arrival->sample(rng);
    while (t <= horizon) {
      const double v = system.mark->sample(rng);
      if (t + v > horizon) d.residuals.push_back(t + v - horizon);
      t += system.arrival->sample(rng);
    }
    d.occupancy = d.residuals.size();
    return d;
  });

  std::vector<std::size_t> occ_exact, occ_fwd;
  std::vector<double> res_exact, res_fwd;
  for (const Draw& d : exact) {
    occ_exact.push_back(d.occupancy);
    res_exact.insert(res_exact.end(), d.residuals.begin(), d.residuals.end());
  }
  for (const Draw& d : forward) {
    occ_fwd.push_back(d.occupancy);
    res_fwd.insert(res_fwd.end(), d.residuals.begin(), d.residuals.end());
  }

  // Analytic laws: occupancy ~ Poisson(10), residuals ~ Exponential(1).
  const Chi2Result chi_exact = chi2_discrete_gof(
      occ_exact, [&](std::size_t k) { return poisson_pmf(k, lambda); }, 0);
  const double ks_exact = ks_p_value(
      ks_statistic(res_exact, [](double r) {
        return r <= 0.0 ? 0.0 : 1.0 - std::exp(-r);
      }),
      res_exact.size());

  // Two-sample agreement with the oracle.
  const Chi2Result chi_two = chi2_two_sample(occ_exact, occ_fwd);
  const double ks_two = ks_two_sample_p_value(
      ks_two_sample_statistic(res_exact, res_fwd), res_exact.size(),
      res_fwd.size());

  const bool pass = chi_exact.p_value > 0.01 && ks_exact > 0.01 &&
                    chi_two.p_value > 0.01 && ks_two > 0.01;
  report(8, pass,
         strf("analytic: Poisson chi2 p=%.4f, Exp KS p=%.4f; vs burn-in "
              "oracle: chi2 p=%.4f, KS p=%.4f (all need > 0.01)",
              chi_exact.p_value, ks_exact, chi_two.p_value, ks_two));
}

// ---------------------------------------------------------------------------
// Criterion 9: passage-coin success probability and geometric segment law.
// ---------------------------------------------------------------------------

void run_criterion_9() {
  const auto x =
      std::shared_ptr<const InterArrivalModel>(make_exponential_arrivals(1.0));
  const double epsilon = 0.5;
  const TiltParams tilt = resolve_tilt(*x, epsilon);
  const double slope = tilt.slope;  // 0.5

  // Engine side: each certification coin is an independent success-
  // probability-q(0) Bernoulli, and the count of coins per walk is geometric.
  const std::size_t walks = 200000;
  const auto gammas = run_replications(walks, [&](std::size_t r) {
    RngStream arrivals(kSeed + 7, static_cast<std::uint64_t>(r),
                       Purpose::kArrivals);
    RngStream coins(kSeed + 7, static_cast<std::uint64_t>(r), Purpose::kCoins);
    return sample_certified_walk(*x, tilt, arrivals, coins).coin_flips;
  });
  KahanSum flips;
  std::vector<std::size_t> shifted(walks);
  for (std::size_t r = 0; r < walks; ++r) {
    flips.add(static_cast<double>(gammas[r]));
    shifted[r] = static_cast<std::size_t>(gammas[r] - 1);
  }
  const double mean_gamma = flips.value() / static_cast<double>(walks);
  const double q_engine = 1.0 - 1.0 / mean_gamma;  // successes per flip
  const double se_engine = std::sqrt(q_engine * (1.0 - q_engine) *
                                     (1.0 - q_engine) /
                                     static_cast<double>(walks));

  // Oracle: simulate the centered walk S_n = sum(slope - X_i) under the
  // nominal measure and test for passage above 0 within N steps.  The step
  // MGF at theta=1 is m = exp(0.5)/2 ~ 0.8244, so the neglected tail is at
  // most m^(N+1)/(1-m); N = 96 certifies it below 1e-6.
  const std::size_t truncation = 96;
  const double mgf_min = std::exp(0.5) / 2.0;
  const double trunc_err =
      std::pow(mgf_min, static_cast<double>(truncation + 1)) / (1.0 - mgf_min);
  const std::size_t nominal_reps = 1000000;
  const auto hits = run_replications(nominal_reps, [&](std::size_t r) {
    RngStream rng(kSeed + 8, static_cast<std::uint64_t>(r),
                  Purpose::kTransient);
    double s = 0.0;
    for (std::size_t n = 0; n < truncation; ++n) {
      s += slope - x->sample(rng);
      if (s >= 0.0) return 1;
    }
    return 0;
  });
  long hit_count = 0;
  for (int h : hits) hit_count += h;
  const double q_nominal =
      static_cast<double>(hit_count) / static_cast<double>(nominal_reps);
  const double se_nominal = std::sqrt(q_nominal * (1.0 - q_nominal) /
                                      static_cast<double>(nominal_reps));

  const double gap = std::fabs(q_engine - q_nominal);
  const double band =
      4.0 * std::sqrt(se_engine * se_engine + se_nominal * se_nominal) +
      trunc_err;
  const bool pass_q = gap <= band;

  // Geometric goodness of fit on the per-walk coin counts.
  const double phat = 1.0 / mean_gamma;
  const Chi2Result geo = chi2_discrete_gof(
      shifted,
      [&](std::size_t k) {
        return phat * std::pow(1.0 - phat, static_cast<double>(k));
      },
      1);
  const bool pass_geo = geo.p_value > 0.01;

  report(9, pass_q && pass_geo,
         strf("coin success %.5f vs truncated-nominal %.5f (band %.5f, "
              "truncation error %.1e certified <= 1e-6); geometric chi2 "
              "p=%.4f (needs > 0.01)",
              q_engine, q_nominal, band, trunc_err, geo.p_value));
}

// ---------------------------------------------------------------------------
// Criterion 10: discrete mark machinery vs exact enumeration.
// ---------------------------------------------------------------------------

void run_criterion_10() {
  const std::vector<double> atoms = {0.5, 1.5, 2.5};
  const std::vector<double> probs = {0.2, 0.5, 0.3};
  const auto mark = make_discrete_mark(atoms, probs);
  const double slope = 1.0, alpha = 1.0;

  // Exact output-law enumeration.  With thresholds 1, 2, 3, ... only slots
  // 1 and 2 can be exceeded (largest atom 2.5 < 3), so the certificate is a
  // function of (V_2, V_3) and the block never extends past four marks.
  // Enumerate all (V_1..V_4) assignments, compute the output
  // (kappa, V_1..V_{kappa+1}), and accumulate cell probabilities.
  std::map<std::vector<int>, double> exact_law;
  for (int c = 0; c < 81; ++c) {
    int idx[4];
    int t = c;
    double p = 1.0;
    for (int i = 0; i < 4; ++i) {
      idx[i] = t % 3;
      t /= 3;
      p *= probs[static_cast<std::size_t>(idx[i])];
    }
    const bool e1 = atoms[static_cast<std::size_t>(idx[1])] > 1.0 * slope;
    const bool e2 = atoms[static_cast<std::size_t>(idx[2])] > 2.0 * slope;
    const int kappa = e2 ? 3 : (e1 ? 2 : 1);
    std::vector<int> cell;
    cell.push_back(kappa);
    for (int i = 0; i <= kappa; ++i) cell.push_back(idx[i]);
    exact_law[cell] += p;
  }

  const std::size_t reps = 1000000;
  struct Obs {
    std::vector<int> cell;
    std::size_t sigma;
  };
  const auto observations = run_replications(reps, [&](std::size_t r) {
    RngStream rng(kSeed + 9, static_cast<std::uint64_t>(r), Purpose::kMarks);
    const MarkBlock b = sample_marks(*mark, slope, alpha, rng);
    Obs o;
    o.cell.push_back(static_cast<int>(b.kappa));
    for (double v : b.marks) {
      int best = 0;
      for (int i = 1; i < 3; ++i) {
        if (std::fabs(v - atoms[static_cast<std::size_t>(i)]) <
            std::fabs(v - atoms[static_cast<std::size_t>(best)])) {
          best = i;
        }
      }
      o.cell.push_back(best);
    }
    o.sigma = b.exceed_slots.size() + 1;
    return o;
  });

  std::map<std::vector<int>, std::size_t> counts;
  KahanSum sigma_sum, sigma_sq;
  for (const Obs& o : observations) {
    ++counts[o.cell];
    sigma_sum.add(static_cast<double>(o.sigma));
    sigma_sq.add(static_cast<double>(o.sigma) * static_cast<double>(o.sigma));
  }

  // Total variation over the union of enumerated and observed cells, so any
  // impossible output contributes its full frequency.
  double tv = 0.0;
  for (const auto& [cell, p] : exact_law) {
    const auto it = counts.find(cell);
    const double freq =
        it == counts.end()
            ? 0.0
            : static_cast<double>(it->second) / static_cast<double>(reps);
    tv += std::fabs(freq - p);
  }
  for (const auto& [cell, n] : counts) {
    if (!exact_law.count(cell)) {
      tv += static_cast<double>(n) / static_cast<double>(reps);
    }
  }
  tv /= 2.0;
  const bool pass_tv = tv < 0.01;

  // Termination: E[record count + 1] against the certified ceiling
  // exp(2 E|V| / slope); one-sided at 4 SE.
  const double mean_abs = 0.2 * 0.5 + 0.5 * 1.5 + 0.3 * 2.5;  // E|V| = 1.6
  const double bound = std::exp(2.0 * mean_abs / slope);
  const double n = static_cast<double>(reps);
  const double sigma_mean = sigma_sum.value() / n;
  const double sigma_var =
      (sigma_sq.value() - n * sigma_mean * sigma_mean) / (n - 1.0);
  const double sigma_se = std::sqrt(sigma_var / n);
  const bool pass_sigma = sigma_mean - 4.0 * sigma_se <= bound;

  report(10, pass_tv && pass_sigma,
         strf("output-law TV %.5f vs enumeration over %zu cells (needs < "
              "0.01); mean record count %.4f <= ceiling %.2f (one-sided 4 SE)",
              tv, exact_law.size(), sigma_mean, bound));
}

// ---------------------------------------------------------------------------
// Criterion 11: the battery detects both exactness mutations.
// ---------------------------------------------------------------------------

void run_criterion_11() {
  // Scenario (a): marks bounded by the certificate slope isolate the
  // skipped-extension fault (conditional fills coincide with nominal draws
  // there, so the other mutation would be a structural no-op).
  ExperimentConfig a;
  a.scenario = "acceptance-skip-extension";
  a.arrival = {"exponential", {1.0}, {}};
  a.mark = {"uniform", {0.0, 0.75}, {}};
  a.lambda = 1.0;
  a.nu = 1.0;
  a.epsilon_fraction = 0.25;
  a.seed = kSeed + 10;
  a.replications = 40000;
  a.test_level = 0.01;
  const BatteryReport a_clean = run_validation_battery(a);
  a.mutate_skip_mark_extension = true;
  const BatteryReport a_mutant = run_validation_battery(a);

  // Scenario (b): unconditioned fill marks violate the certificate under
  // lognormal services at lambda = 20.
  ExperimentConfig b;
  b.scenario = "acceptance-nominal-fill";
  b.arrival = {"exponential", {1.0}, {}};
  b.mark = {"lognormal", {-0.25, 0.5}, {}};
  b.lambda = 20.0;
  b.nu = 1.0;
  b.epsilon_fraction = 0.5;
  b.seed = kSeed + 11;
  b.replications = 3000;
  b.test_level = 0.01;
  const BatteryReport b_clean = run_validation_battery(b);
  b.mutate_nominal_fill = true;
  const BatteryReport b_mutant = run_validation_battery(b);

  const auto failing = [](const BatteryReport& r) {
    std::string names;
    for (const BatteryTest& t : r.tests) {
      if (!t.pass) names += (names.empty() ? "" : ",") + t.name;
    }
    return names.empty() ? std::string("none") : names;
  };
  const bool pass = !a_mutant.all_pass && !b_mutant.all_pass;
  report(11, pass,
         strf("skipped-extension mutant fails [%s] (clean control %s); "
              "unconditional-fill mutant fails [%s] (clean control %s)",
              failing(a_mutant).c_str(), a_clean.all_pass ? "passes" : "FAILS",
              failing(b_mutant).c_str(),
              b_clean.all_pass ? "passes" : "FAILS"));
}

}  // namespace

int main() {
  std::printf("stablepp acceptance gate (seed %llu)\n",
              static_cast<unsigned long long>(kSeed));
  const double mean_arrivals = run_criteria_1_2_3();
  run_criterion_4();
  run_criterion_5(mean_arrivals);
  run_criterion_6();
  run_criterion_7();
  run_criterion_8();
  run_criterion_9();
  run_criterion_10();
  run_criterion_11();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
