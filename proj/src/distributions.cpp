#include "stablepp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "stablepp/special.hpp"

namespace stablepp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Doubles `hi` until cdf(hi) >= p, then bisects.  For distributions whose
// equilibrium/length-biased laws have no elementary quantile.
template <typename Cdf>
double grow_and_invert(const Cdf& cdf, double p, double lo, double hi0) {
  double hi = hi0;
  for (int i = 0; i < 200 && cdf(hi) < p; ++i) hi *= 2.0;
  return invert_cdf(cdf, p, lo, hi, 1e-12 * (1.0 + hi));
}

class ExponentialArrivals final : public InterArrivalModel {
 public:
  explicit ExponentialArrivals(double rate) : rate_(rate) {
    require(rate > 0.0, "exponential arrivals: rate must be positive");
  }

  double mean() const override { return 1.0 / rate_; }
  double variance() const override { return 1.0 / (rate_ * rate_); }

  double cumulant(double theta) const override {
    return -std::log1p(-theta / rate_);
  }
  double cumulant_derivative(double theta) const override {
    return 1.0 / (rate_ - theta);
  }
  double cumulant_domain_sup() const override { return rate_; }

  double cdf(double x) const override {
    return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x);
  }
  double quantile(double p) const override { return -std::log1p(-p) / rate_; }
  double integrated_tail(double x) const override {
    return x <= 0.0 ? mean() - x : std::exp(-rate_ * x) / rate_;
  }

  double sample(RngStream& rng) const override { return quantile(rng.next_double()); }
  double sample_tilted(RngStream& rng, double theta) const override {
    return -std::log1p(-rng.next_double()) / (rate_ - theta);
  }
  double sample_equilibrium(RngStream& rng) const override { return sample(rng); }
  double sample_length_biased(RngStream& rng) const override {
    return gamma_p_inv(2.0, rng.next_double()) / rate_;
  }

 private:
  double rate_;
};

class GammaArrivals final : public InterArrivalModel {
 public:
  GammaArrivals(double shape, double rate) : shape_(shape), rate_(rate) {
    require(shape > 0.0 && rate > 0.0, "gamma arrivals: shape and rate must be positive");
  }

  double mean() const override { return shape_ / rate_; }
  double variance() const override { return shape_ / (rate_ * rate_); }

  double cumulant(double theta) const override {
    return -shape_ * std::log1p(-theta / rate_);
  }
  double cumulant_derivative(double theta) const override {
    return shape_ / (rate_ - theta);
  }
  double cumulant_domain_sup() const override { return rate_; }

  double cdf(double x) const override {
    return x <= 0.0 ? 0.0 : gamma_p(shape_, rate_ * x);
  }
  double quantile(double p) const override { return gamma_p_inv(shape_, p) / rate_; }
  double integrated_tail(double x) const override {
    if (x <= 0.0) return mean() - x;
    return mean() * gamma_q(shape_ + 1.0, rate_ * x) - x * gamma_q(shape_, rate_ * x);
  }

  double sample(RngStream& rng) const override { return quantile(rng.next_double()); }
  double sample_tilted(RngStream& rng, double theta) const override {
    return gamma_p_inv(shape_, rng.next_double()) / (rate_ - theta);
  }
  double sample_equilibrium(RngStream& rng) const override {
    const double mu = mean();
    auto eq_cdf = [this, mu](double x) { return 1.0 - integrated_tail(x) / mu; };
    return grow_and_invert(eq_cdf, rng.next_double(), 0.0, mu);
  }
  double sample_length_biased(RngStream& rng) const override {
    return gamma_p_inv(shape_ + 1.0, rng.next_double()) / rate_;
  }

 private:
  double shape_;
  double rate_;
};

class DeterministicArrivals final : public InterArrivalModel {
 public:
  explicit DeterministicArrivals(double value) : value_(value) {
    require(value > 0.0, "deterministic arrivals: value must be positive");
  }

  double mean() const override { return value_; }
  double variance() const override { return 0.0; }

  double cumulant(double theta) const override { return theta * value_; }
  double cumulant_derivative(double) const override { return value_; }
  double cumulant_domain_sup() const override { return kInf; }

  double cdf(double x) const override { return x >= value_ ? 1.0 : 0.0; }
  double quantile(double) const override { return value_; }
  double integrated_tail(double x) const override {
    return x < value_ ? value_ - x : 0.0;
  }

  double sample(RngStream&) const override { return value_; }
  double sample_tilted(RngStream&, double) const override { return value_; }
  double sample_equilibrium(RngStream& rng) const override {
    return value_ * rng.next_double();
  }
  double sample_length_biased(RngStream&) const override { return value_; }

 private:
  double value_;
};

class ShiftedExponentialArrivals final : public InterArrivalModel {
 public:
  ShiftedExponentialArrivals(double shift, double rate)
      : shift_(shift), rate_(rate) {
    require(shift > 0.0 && rate > 0.0,
            "shifted exponential arrivals: shift and rate must be positive");
  }

  double mean() const override { return shift_ + 1.0 / rate_; }
  double variance() const override { return 1.0 / (rate_ * rate_); }

  double cumulant(double theta) const override {
    return theta * shift_ - std::log1p(-theta / rate_);
  }
  double cumulant_derivative(double theta) const override {
    return shift_ + 1.0 / (rate_ - theta);
  }
  double cumulant_domain_sup() const override { return rate_; }

  double cdf(double x) const override {
    return x <= shift_ ? 0.0 : -std::expm1(-rate_ * (x - shift_));
  }
  double quantile(double p) const override {
    return shift_ - std::log1p(-p) / rate_;
  }
  double integrated_tail(double x) const override {
    if (x <= shift_) return mean() - x;
    return std::exp(-rate_ * (x - shift_)) / rate_;
  }

  double sample(RngStream& rng) const override { return quantile(rng.next_double()); }
  double sample_tilted(RngStream& rng, double theta) const override {
    return shift_ - std::log1p(-rng.next_double()) / (rate_ - theta);
  }
  double sample_equilibrium(RngStream& rng) const override {
    const double mu = mean();
    const double u = rng.next_double();
    // Density P(X > x)/mu: flat 1/mu on [0, shift], exponential tail above.
    if (u <= shift_ / mu) return u * mu;
    return shift_ - std::log(rate_ * mu * (1.0 - u)) / rate_;
  }
  double sample_length_biased(RngStream& rng) const override {
    const double mu = mean();
    auto lb_cdf = [this, mu](double x) {
      if (x <= shift_) return 0.0;
      const double e = std::exp(-rate_ * (x - shift_));
      return (shift_ + 1.0 / rate_ - (x + 1.0 / rate_) * e) / mu;
    };
    return grow_and_invert(lb_cdf, rng.next_double(), shift_, 2.0 * mu + shift_);
  }

 private:
  double shift_;
  double rate_;
};

// Conditional sampling on |V| in (lo, hi] shared by the continuous families:
// maps one uniform onto the tail-probability interval, which stays accurate
// deep in the upper tail where cdf values saturate at 1.
template <typename Model>
double conditional_by_tail(const Model& m, RngStream& rng, double lo, double hi) {
  const double t_lo = m.tail_prob(lo);
  const double t_hi = hi == kInf ? 0.0 : m.tail_prob(hi);
  require(t_lo > t_hi, "sample_conditional: interval has zero probability");
  const double w = t_hi + rng.next_double() * (t_lo - t_hi);
  return m.quantile_tail(w);
}

class LognormalMark final : public MarkModel {
 public:
  LognormalMark(double log_mean, double log_sd) : m_(log_mean), s_(log_sd) {
    require(log_sd > 0.0, "lognormal mark: log_sd must be positive");
  }

  double mean() const override { return std::exp(m_ + 0.5 * s_ * s_); }
  double abs_power_mean(double r) const override {
    return std::exp(r * m_ + 0.5 * r * r * s_ * s_);
  }

  double cdf(double v) const override {
    return v <= 0.0 ? 0.0 : norm_cdf((std::log(v) - m_) / s_);
  }
  double quantile(double p) const override {
    return std::exp(m_ + s_ * norm_quantile(p));
  }
  double tail_prob(double v) const override {
    return v <= 0.0 ? 1.0 : norm_cdf((m_ - std::log(v)) / s_);
  }
  double quantile_tail(double q) const override {
    return std::exp(m_ - s_ * norm_quantile(q));
  }
  double integrated_tail(double v) const override {
    if (v <= 0.0) return mean() - v;
    const double lv = std::log(v);
    return mean() * norm_cdf((m_ + s_ * s_ - lv) / s_) - v * norm_cdf((m_ - lv) / s_);
  }

  double excess_power_bound(double k, double r) const override {
    // |V|^r is again lognormal, so the excess mean is exact, not a bound.
    if (k <= 0.0) return abs_power_mean(r) - k;
    const double mr = r * m_;
    const double sr = r * s_;
    const double lk = std::log(k);
    return std::exp(mr + 0.5 * sr * sr) * norm_cdf((mr + sr * sr - lk) / sr) -
           k * norm_cdf((mr - lk) / sr);
  }

  double sample(RngStream& rng) const override { return quantile(rng.next_double()); }
  double sample_abs_le(RngStream& rng, double bound) const override {
    const double c = cdf(bound);
    require(c > 0.0, "sample_abs_le: zero probability below bound");
    return quantile(rng.next_double() * c);
  }
  double sample_abs_gt(RngStream& rng, double bound) const override {
    const double t = tail_prob(bound);
    require(t > 0.0, "sample_abs_gt: zero probability above bound");
    return quantile_tail(rng.next_double() * t);
  }
  double sample_conditional(RngStream& rng, double lo, double hi) const override {
    return conditional_by_tail(*this, rng, lo, hi);
  }

 private:
  double m_;
  double s_;
};

class ExponentialMark final : public MarkModel {
 public:
  explicit ExponentialMark(double rate) : rate_(rate) {
    require(rate > 0.0, "exponential mark: rate must be positive");
  }

  double mean() const override { return 1.0 / rate_; }
  double abs_power_mean(double r) const override {
    return std::exp(std::lgamma(1.0 + r) - r * std::log(rate_));
  }

  double cdf(double v) const override {
    return v <= 0.0 ? 0.0 : -std::expm1(-rate_ * v);
  }
  double quantile(double p) const override { return -std::log1p(-p) / rate_; }
  double tail_prob(double v) const override {
    return v <= 0.0 ? 1.0 : std::exp(-rate_ * v);
  }
  double quantile_tail(double q) const override { return -std::log(q) / rate_; }
  double integrated_tail(double v) const override {
    return v <= 0.0 ? mean() - v : std::exp(-rate_ * v) / rate_;
  }

  double excess_power_bound(double k, double r) const override {
    // E[(V^r - k)^+] = Gamma(r+1)/rate^r * Q(r, rate k^{1/r}): exact.
    if (k <= 0.0) return abs_power_mean(r) - k;
    return abs_power_mean(r) * gamma_q(r, rate_ * std::pow(k, 1.0 / r));
  }

  double sample(RngStream& rng) const override { return quantile(rng.next_double()); }
  double sample_abs_le(RngStream& rng, double bound) const override {
    const double c = cdf(bound);
    require(c > 0.0, "sample_abs_le: zero probability below bound");
    return quantile(rng.next_double() * c);
  }
  double sample_abs_gt(RngStream& rng, double bound) const override {
    return std::max(bound, 0.0) + quantile(rng.next_double());  // memoryless
  }
  double sample_conditional(RngStream& rng, double lo, double hi) const override {
    return conditional_by_tail(*this, rng, lo, hi);
  }

 private:
  double rate_;
};

class GammaMark final : public MarkModel {
 public:
  GammaMark(double shape, double rate) : shape_(shape), rate_(rate) {
    require(shape > 0.0 && rate > 0.0, "gamma mark: shape and rate must be positive");
  }

  double mean() const override { return shape_ / rate_; }
  double abs_power_mean(double r) const override {
    return std::exp(std::lgamma(shape_ + r) - std::lgamma(shape_) -
                    r * std::log(rate_));
  }

  double cdf(double v) const override {
    return v <= 0.0 ? 0.0 : gamma_p(shape_, rate_ * v);
  }
  double quantile(double p) const override { return gamma_p_inv(shape_, p) / rate_; }
  double tail_prob(double v) const override {
    return v <= 0.0 ? 1.0 : gamma_q(shape_, rate_ * v);
  }
  double quantile_tail(double q) const override {
    return gamma_q_inv(shape_, q) / rate_;
  }
  double integrated_tail(double v) const override {
    if (v <= 0.0) return mean() - v;
    return mean() * gamma_q(shape_ + 1.0, rate_ * v) - v * gamma_q(shape_, rate_ * v);
  }

  double excess_power_bound(double k, double r) const override {
    if (k <= 0.0) return abs_power_mean(r) - k;
    if (r == 1.0) return integrated_tail(k);
    // Markov bound on the excess; exact value has no elementary form.
    return std::min(abs_power_mean(r), abs_power_mean(2.0 * r) / k);
  }

  double sample(RngStream& rng) const override { return quantile(rng.next_double()); }
  double sample_abs_le(RngStream& rng, double bound) const override {
    const double c = cdf(bound);
    require(c > 0.0, "sample_abs_le: zero probability below bound");
    return quantile(rng.next_double() * c);
  }
  double sample_abs_gt(RngStream& rng, double bound) const override {
    const double t = tail_prob(bound);
    require(t > 0.0, "sample_abs_gt: zero probability above bound");
    return quantile_tail(rng.next_double() * t);
  }
  double sample_conditional(RngStream& rng, double lo, double hi) const override {
    return conditional_by_tail(*this, rng, lo, hi);
  }

 private:
  double shape_;
  double rate_;
};

class UniformMark final : public MarkModel {
 public:
  UniformMark(double lo, double hi) : lo_(lo), hi_(hi) {
    require(lo >= 0.0 && hi > lo, "uniform mark: need 0 <= lo < hi");
  }

  double mean() const override { return 0.5 * (lo_ + hi_); }
  double abs_power_mean(double r) const override {
    return (std::pow(hi_, r + 1.0) - std::pow(lo_, r + 1.0)) /
           ((hi_ - lo_) * (r + 1.0));
  }

  double cdf(double v) const override {
    return std::clamp((v - lo_) / (hi_ - lo_), 0.0, 1.0);
  }
  double quantile(double p) const override { return lo_ + p * (hi_ - lo_); }
  double tail_prob(double v) const override {
    return std::clamp((hi_ - v) / (hi_ - lo_), 0.0, 1.0);
  }
  double quantile_tail(double q) const override { return hi_ - q * (hi_ - lo_); }
  double integrated_tail(double v) const override {
    if (v <= lo_) return mean() - v;
    if (v >= hi_) return 0.0;
    return 0.5 * (hi_ - v) * (hi_ - v) / (hi_ - lo_);
  }

  double excess_power_bound(double k, double r) const override {
    if (k <= 0.0) return abs_power_mean(r) - k;
    const double cut = std::pow(k, 1.0 / r);
    if (cut >= hi_) return 0.0;
    const double a = std::max(lo_, cut);
    return ((std::pow(hi_, r + 1.0) - std::pow(a, r + 1.0)) / (r + 1.0) -
            k * (hi_ - a)) / (hi_ - lo_);
  }

  double sample(RngStream& rng) const override { return quantile(rng.next_double()); }
  double sample_abs_le(RngStream& rng, double bound) const override {
    require(bound > lo_, "sample_abs_le: zero probability below bound");
    return lo_ + rng.next_double() * (std::min(bound, hi_) - lo_);
  }
  double sample_abs_gt(RngStream& rng, double bound) const override {
    require(bound < hi_, "sample_abs_gt: zero probability above bound");
    const double a = std::max(bound, lo_);
    return a + rng.next_double() * (hi_ - a);
  }
  double sample_conditional(RngStream& rng, double lo, double hi) const override {
    const double a = std::max(lo, lo_);
    const double b = std::min(hi, hi_);
    require(b > a, "sample_conditional: interval has zero probability");
    return a + rng.next_double() * (b - a);
  }

 private:
  double lo_;
  double hi_;
};

class DiscreteMark final : public MarkModel {
 public:
  DiscreteMark(std::vector<double> values, std::vector<double> probs) {
    require(!values.empty() && values.size() == probs.size(),
            "discrete mark: need matching nonempty values/probs");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    double total = 0.0;
    for (std::size_t i : order) {
      require(values[i] >= 0.0, "discrete mark: values must be nonnegative");
      require(probs[i] > 0.0, "discrete mark: probs must be positive");
      v_.push_back(values[i]);
      p_.push_back(probs[i]);
      total += probs[i];
    }
    require(std::abs(total - 1.0) < 1e-9, "discrete mark: probs must sum to 1");
    for (double& p : p_) p /= total;
  }

  double mean() const override {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += p_[i] * v_[i];
    return s;
  }
  double abs_power_mean(double r) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += p_[i] * std::pow(v_[i], r);
    return s;
  }

  double cdf(double v) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size() && v_[i] <= v; ++i) s += p_[i];
    return s;
  }
  double quantile(double p) const override {
    double c = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      c += p_[i];
      if (p <= c) return v_[i];
    }
    return v_.back();
  }
  double tail_prob(double v) const override {
    double s = 0.0;
    for (std::size_t i = v_.size(); i-- > 0 && v_[i] > v;) s += p_[i];
    return s;
  }
  double quantile_tail(double q) const override {
    double s = 0.0;
    for (std::size_t i = v_.size(); i-- > 0;) {
      s += p_[i];
      if (s >= q) return v_[i];
    }
    return v_.front();
  }
  double integrated_tail(double v) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += p_[i] * std::max(v_[i] - v, 0.0);
    return s;
  }

  double excess_power_bound(double k, double r) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      s += p_[i] * std::max(std::pow(v_[i], r) - k, 0.0);
    }
    return s;
  }

  double sample(RngStream& rng) const override { return quantile(rng.next_double()); }
  double sample_abs_le(RngStream& rng, double bound) const override {
    return sample_in([&](double v) { return v <= bound; }, rng, "sample_abs_le");
  }
  double sample_abs_gt(RngStream& rng, double bound) const override {
    return sample_in([&](double v) { return v > bound; }, rng, "sample_abs_gt");
  }
  double sample_conditional(RngStream& rng, double lo, double hi) const override {
    return sample_in([&](double v) { return lo < v && v <= hi; }, rng,
                     "sample_conditional");
  }

 private:
  template <typename Pred>
  double sample_in(const Pred& keep, RngStream& rng, const char* who) const {
    double mass = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (keep(v_[i])) mass += p_[i];
    }
    require(mass > 0.0, (std::string(who) + ": zero probability region").c_str());
    double target = rng.next_double() * mass;
    double c = 0.0;
    double last = v_.back();
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (!keep(v_[i])) continue;
      c += p_[i];
      last = v_[i];
      if (target <= c) return v_[i];
    }
    return last;
  }

  std::vector<double> v_;
  std::vector<double> p_;
};

class TimeScaledArrivals final : public InterArrivalModel {
 public:
  TimeScaledArrivals(std::shared_ptr<const InterArrivalModel> base, double scale)
      : base_(std::move(base)), c_(scale) {
    require(base_ != nullptr && c_ > 0.0, "time scaled arrivals: need base and scale > 0");
  }

  double mean() const override { return c_ * base_->mean(); }
  double variance() const override { return c_ * c_ * base_->variance(); }
  double cumulant(double theta) const override { return base_->cumulant(c_ * theta); }
  double cumulant_derivative(double theta) const override {
    return c_ * base_->cumulant_derivative(c_ * theta);
  }
  double cumulant_domain_sup() const override {
    return base_->cumulant_domain_sup() / c_;
  }
  double cdf(double x) const override { return base_->cdf(x / c_); }
  double quantile(double p) const override { return c_ * base_->quantile(p); }
  double integrated_tail(double x) const override {
    return c_ * base_->integrated_tail(x / c_);
  }
  double sample(RngStream& rng) const override { return c_ * base_->sample(rng); }
  double sample_tilted(RngStream& rng, double theta) const override {
    return c_ * base_->sample_tilted(rng, c_ * theta);
  }
  double sample_equilibrium(RngStream& rng) const override {
    return c_ * base_->sample_equilibrium(rng);
  }
  double sample_length_biased(RngStream& rng) const override {
    return c_ * base_->sample_length_biased(rng);
  }

 private:
  std::shared_ptr<const InterArrivalModel> base_;
  double c_;
};

class MarkScaled final : public MarkModel {
 public:
  MarkScaled(std::shared_ptr<const MarkModel> base, double scale)
      : base_(std::move(base)), c_(scale) {
    require(base_ != nullptr && c_ > 0.0, "mark scaled: need base and scale > 0");
  }

  double mean() const override { return c_ * base_->mean(); }
  double abs_power_mean(double r) const override {
    return std::pow(c_, r) * base_->abs_power_mean(r);
  }
  double cdf(double v) const override { return base_->cdf(v / c_); }
  double quantile(double p) const override { return c_ * base_->quantile(p); }
  double tail_prob(double v) const override { return base_->tail_prob(v / c_); }
  double quantile_tail(double q) const override { return c_ * base_->quantile_tail(q); }
  double integrated_tail(double v) const override {
    return c_ * base_->integrated_tail(v / c_);
  }
  double excess_power_bound(double k, double r) const override {
    const double cr = std::pow(c_, r);
    return cr * base_->excess_power_bound(k / cr, r);
  }
  double sample(RngStream& rng) const override { return c_ * base_->sample(rng); }
  double sample_abs_le(RngStream& rng, double bound) const override {
    return c_ * base_->sample_abs_le(rng, bound / c_);
  }
  double sample_abs_gt(RngStream& rng, double bound) const override {
    return c_ * base_->sample_abs_gt(rng, bound / c_);
  }
  double sample_conditional(RngStream& rng, double lo, double hi) const override {
    return c_ * base_->sample_conditional(rng, lo / c_, hi / c_);
  }

 private:
  std::shared_ptr<const MarkModel> base_;
  double c_;
};

}  // namespace

std::unique_ptr<InterArrivalModel> make_exponential_arrivals(double rate) {
  return std::make_unique<ExponentialArrivals>(rate);
}

std::unique_ptr<InterArrivalModel> make_gamma_arrivals(double shape, double rate) {
  return std::make_unique<GammaArrivals>(shape, rate);
}

std::unique_ptr<InterArrivalModel> make_deterministic_arrivals(double value) {
  return std::make_unique<DeterministicArrivals>(value);
}

std::unique_ptr<InterArrivalModel> make_shifted_exponential_arrivals(double shift,
                                                                     double rate) {
  return std::make_unique<ShiftedExponentialArrivals>(shift, rate);
}

std::unique_ptr<MarkModel> make_lognormal_mark(double log_mean, double log_sd) {
  return std::make_unique<LognormalMark>(log_mean, log_sd);
}

std::unique_ptr<MarkModel> make_exponential_mark(double rate) {
  return std::make_unique<ExponentialMark>(rate);
}

std::unique_ptr<MarkModel> make_gamma_mark(double shape, double rate) {
  return std::make_unique<GammaMark>(shape, rate);
}

std::unique_ptr<MarkModel> make_uniform_mark(double lo, double hi) {
  return std::make_unique<UniformMark>(lo, hi);
}

std::unique_ptr<MarkModel> make_discrete_mark(std::vector<double> values,
                                              std::vector<double> probs) {
  return std::make_unique<DiscreteMark>(std::move(values), std::move(probs));
}

std::unique_ptr<InterArrivalModel> make_time_scaled(
    std::shared_ptr<const InterArrivalModel> base, double scale) {
  return std::make_unique<TimeScaledArrivals>(std::move(base), scale);
}

std::unique_ptr<MarkModel> make_mark_scaled(std::shared_ptr<const MarkModel> base,
                                            double scale) {
  return std::make_unique<MarkScaled>(std::move(base), scale);
}

}  // namespace stablepp
