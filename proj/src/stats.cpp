#include "stablepp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stablepp/special.hpp"

namespace stablepp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Merges adjacent cells until every expected count reaches min_expected.
// Returns merged (observed, expected) pairs; a trailing under-filled merge
// joins the previous cell.
void merge_cells(std::vector<double>& observed, std::vector<double>& expected,
                 double min_expected) {
  std::vector<double> obs, exp;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= min_expected) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
  }
  observed = std::move(obs);
  expected = std::move(exp);
}

Chi2Result chi2_from_cells(std::vector<double> observed,
                           std::vector<double> expected, double min_expected,
                           std::size_t estimated_params) {
  merge_cells(observed, expected, min_expected);
  require(observed.size() >= 2, "chi2: fewer than two cells after merging");
  KahanSum stat;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat.add(d * d / expected[i]);
  }
  Chi2Result r;
  r.cells = observed.size();
  r.statistic = stat.value();
  r.dof = static_cast<double>(observed.size() - 1 - estimated_params);
  require(r.dof >= 1.0, "chi2: no degrees of freedom left");
  r.p_value = chi2_sf(r.statistic, r.dof);
  return r;
}

}  // namespace

MeanSe mean_and_se(const std::vector<double>& xs) {
  MeanSe m;
  m.n = xs.size();
  if (xs.empty()) return m;
  KahanSum sum;
  for (double x : xs) sum.add(x);
  m.mean = sum.value() / static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  KahanSum sq;
  for (double x : xs) sq.add((x - m.mean) * (x - m.mean));
  m.sd = std::sqrt(sq.value() / static_cast<double>(xs.size() - 1));
  m.se = m.sd / std::sqrt(static_cast<double>(xs.size()));
  return m;
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  KahanSum sum;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum.add((k % 2 == 1) ? term : -term);
    if (term < 1e-18) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum.value()));
}

double ks_statistic(std::vector<double> xs,
                    const std::function<double(double)>& cdf) {
  require(!xs.empty(), "ks_statistic: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

double ks_p_value(double statistic, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  return kolmogorov_sf(statistic * (rn + 0.12 + 0.11 / rn));
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_p_value(double statistic, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) /
                    static_cast<double>(n + m);
  const double rn = std::sqrt(ne);
  return kolmogorov_sf(statistic * (rn + 0.12 + 0.11 / rn));
}

double chi2_sf(double x, double dof) {
  require(dof > 0.0, "chi2_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

double poisson_pmf(std::size_t k, double mean) {
  require(mean > 0.0, "poisson_pmf: mean must be positive");
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

Chi2Result chi2_discrete_gof(const std::vector<std::size_t>& observations,
                             const std::function<double(std::size_t)>& pmf,
                             std::size_t estimated_params,
                             double min_expected) {
  require(!observations.empty(), "chi2_discrete_gof: empty sample");
  const std::size_t max_value =
      *std::max_element(observations.begin(), observations.end());
  std::vector<double> observed(max_value + 1, 0.0);
  for (std::size_t v : observations) observed[v] += 1.0;
  const double n = static_cast<double>(observations.size());
  std::vector<double> expected(max_value + 1, 0.0);
  double mass = 0.0;
  for (std::size_t k = 0; k <= max_value; ++k) {
    const double p = pmf(k);
    require(p >= 0.0, "chi2_discrete_gof: negative pmf value");
    expected[k] = n * p;
    mass += p;
  }
  // Tail mass beyond the largest observation belongs to the last cell.
  expected[max_value] += n * std::max(0.0, 1.0 - mass);
  return chi2_from_cells(std::move(observed), std::move(expected),
                         min_expected, estimated_params);
}

Chi2Result chi2_two_sample(const std::vector<std::size_t>& a,
                           const std::vector<std::size_t>& b,
                           double min_expected) {
  require(!a.empty() && !b.empty(), "chi2_two_sample: empty sample");
  const std::size_t max_a = *std::max_element(a.begin(), a.end());
  const std::size_t max_b = *std::max_element(b.begin(), b.end());
  const std::size_t cells = std::max(max_a, max_b) + 1;
  std::vector<double> ca(cells, 0.0), cb(cells, 0.0);
  for (std::size_t v : a) ca[v] += 1.0;
  for (std::size_t v : b) cb[v] += 1.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double total = na + nb;

  // Merge on pooled expected counts so both rows stay aligned, then form the
  // 2 x cells homogeneity statistic.
  std::vector<double> ma, mb;
  double sa = 0.0, sb = 0.0;
  auto flush = [&] {
    ma.push_back(sa);
    mb.push_back(sb);
    sa = sb = 0.0;
  };
  for (std::size_t i = 0; i < cells; ++i) {
    sa += ca[i];
    sb += cb[i];
    const double pooled = sa + sb;
    if (std::min(na, nb) * pooled / total >= min_expected) flush();
  }
  if (sa > 0.0 || sb > 0.0) {
    if (ma.empty()) {
      flush();
    } else {
      ma.back() += sa;
      mb.back() += sb;
    }
  }
  require(ma.size() >= 2, "chi2_two_sample: fewer than two cells");
  KahanSum stat;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const double pooled = ma[i] + mb[i];
    const double ea = na * pooled / total;
    const double eb = nb * pooled / total;
    stat.add((ma[i] - ea) * (ma[i] - ea) / ea);
    stat.add((mb[i] - eb) * (mb[i] - eb) / eb);
  }
  Chi2Result r;
  r.cells = ma.size();
  r.statistic = stat.value();
  r.dof = static_cast<double>(ma.size() - 1);
  r.p_value = chi2_sf(r.statistic, r.dof);
  return r;
}

}  // namespace stablepp
