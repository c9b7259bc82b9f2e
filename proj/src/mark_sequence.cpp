#include "stablepp/mark_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "stablepp/errors.hpp"

namespace stablepp {

namespace {

// Largest slot index the lazy tail bounds may be asked to materialize before
// the refinement is declared stuck.  All supported mark models have certified
// tail-sum bounds that vanish, so hitting this means a model bug.
constexpr std::size_t kMaxTailSlot = 1'000'000;
constexpr std::size_t kMaxAttempts = 1'000'000'000;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double slot_threshold(double slope, double alpha, std::size_t slot) {
  return std::pow(static_cast<double>(slot) * slope, alpha);
}

// Lazily materialized per-slot exceedance probabilities together with running
// log-products and partial sums, plus a certified upper bound on the tail sum
// sum_{n > l} p(n).  One instance lives per top-level call, so the sampler is
// re-entrant and thread-safe by construction.
class TailCache {
 public:
  TailCache(const MarkModel& mark, double slope, double alpha)
      : mark_(mark), slope_(slope), alpha_(alpha) {
    cum_log_.push_back(0.0);
    cum_ones_.push_back(0);
    cum_p_.push_back(0.0);
  }

  // p(n) = P(|V| > (n * slope)^alpha), slot n >= 1.
  double p(std::size_t n) {
    ensure(n);
    return p_[n - 1];
  }

  // log prod_{after < j <= l} (1 - p(j)).  Slots with p(j) == 1 are counted
  // separately so the window product is exactly -inf when one is inside and a
  // finite difference of partial sums otherwise (a raw cumulative log would
  // turn such windows into -inf - -inf = NaN).
  double log_window(std::size_t after, std::size_t l) {
    ensure(l);
    if (cum_ones_[l] > cum_ones_[after]) {
      return -std::numeric_limits<double>::infinity();
    }
    return cum_log_[l] - cum_log_[after];
  }

  // sum_{j=1}^{n} p(j); cum_p(0) == 0.
  double cum_p(std::size_t n) {
    ensure(n);
    return cum_p_[n];
  }

  // Certified upper bound on sum_{n > l} p(n).  With W = |V|^{1/alpha} the
  // terms are P(W > n * slope), a nonincreasing sequence, so the sum is at
  // most (1/slope) * E[(W - l*slope)^+], and excess_power_bound dominates
  // that expectation.
  double tail_sum_bound(std::size_t l) {
    return mark_.excess_power_bound(static_cast<double>(l) * slope_,
                                    1.0 / alpha_) /
           slope_;
  }

 private:
  void ensure(std::size_t n) {
    if (n > kMaxTailSlot) {
      throw SimulationLimitError(
          "exceedance tail bounds failed to resolve within " +
          std::to_string(kMaxTailSlot) + " slots");
    }
    while (p_.size() < n) {
      const std::size_t slot = p_.size() + 1;
      const double pn = mark_.tail_prob(slot_threshold(slope_, alpha_, slot));
      p_.push_back(pn);
      const bool certain = pn >= 1.0;
      cum_log_.push_back(cum_log_.back() + (certain ? 0.0 : std::log1p(-pn)));
      cum_ones_.push_back(cum_ones_.back() + (certain ? 1 : 0));
      cum_p_.push_back(cum_p_.back() + pn);
    }
  }

  const MarkModel& mark_;
  double slope_;
  double alpha_;
  std::vector<double> p_;
  std::vector<double> cum_log_;
  std::vector<std::size_t> cum_ones_;
  std::vector<double> cum_p_;
};

// Success probability prod_{n > after} (1 - p(n)), decided exactly with one
// uniform.  Upper bound: the partial product over (after, l].  Lower bound:
// partial product times exp(-2 * tail_sum_bound(l)), valid once p(l+1) <= 1/2
// because log(1 - p) >= -2p on [0, 1/2] and p(n) is nonincreasing in n.  Both
// bounds converge to the product as l grows, so the comparison against the
// uniform resolves almost surely.
bool no_future_exceedance_impl(TailCache& cache, std::size_t after,
                               RngStream& rng) {
  const double log_u = std::log(rng.next_double());
  std::size_t span = 16;
  for (int round = 0; round < 64; ++round) {
    const std::size_t l = after + span;
    const double log_upper = cache.log_window(after, l);
    if (log_u > log_upper) return false;
    if (cache.p(l + 1) <= 0.5) {
      const double log_lower = log_upper - 2.0 * cache.tail_sum_bound(l);
      if (log_u < log_lower) return true;
    }
    span *= 2;
  }
  throw SimulationLimitError(
      "exceedance stop coin failed to resolve; tail bound does not vanish");
}

// Next exceedance slot after `after`, conditional on one existing.  Proposal:
// slot n > after with mass p(n) / Z, Z = sum_{n > after} p(n), realized as an
// exact inverse transform: with C(n) = sum_{after < j <= n} p(j) the target
// index is min{ n : C(n) >= u * Z }, pinned down by sandwiching Z between the
// partial sum C(l) and C(l) + tail_sum_bound(l).  Thinning by the probability
// prod_{after < j < n} (1 - p(j)) (a finite product) turns the proposal into
// the first-exceedance law.
std::size_t next_exceedance_slot_impl(TailCache& cache, std::size_t after,
                                      RngStream& rng) {
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double u = rng.next_double();
    std::size_t chosen = 0;
    std::size_t span = 16;
    for (int round = 0;; ++round) {
      if (round >= 64) {
        throw SimulationLimitError(
            "exceedance slot proposal failed to resolve; no tail mass");
      }
      const std::size_t l = after + span;
      const double z_lo = cache.cum_p(l) - cache.cum_p(after);
      const double z_hi = z_lo + cache.tail_sum_bound(l);
      // Smallest n in (after, l] with C(n) >= u * z, for z = z_lo and z_hi.
      std::size_t n_lo = 0;
      std::size_t n_hi = 0;
      for (std::size_t n = after + 1; n <= l; ++n) {
        const double c = cache.cum_p(n) - cache.cum_p(after);
        if (n_lo == 0 && c >= u * z_lo) n_lo = n;
        if (c >= u * z_hi) {
          n_hi = n;
          break;
        }
      }
      if (n_lo != 0 && n_lo == n_hi) {
        chosen = n_lo;
        break;
      }
      span *= 2;
    }
    const double log_accept = cache.log_window(after, chosen - 1);
    if (std::log(rng.next_double()) <= log_accept) return chosen;
  }
  throw SimulationLimitError("exceedance slot thinning exceeded attempt cap");
}

double fill_at_or_below(const MarkModel& mark, double slope, double alpha,
                        std::size_t slot, RngStream& rng,
                        const MarkOptions& options) {
  if (options.nominal_fill) return mark.sample(rng);
  return mark.sample_abs_le(rng, slot_threshold(slope, alpha, slot));
}

}  // namespace

double exceed_prob(const MarkModel& mark, double slope, double alpha,
                   std::size_t slot) {
  require(slope > 0.0, "exceed_prob: slope must be positive");
  require(alpha > 0.0, "exceed_prob: alpha must be positive");
  return mark.tail_prob(slot_threshold(slope, alpha, slot));
}

bool no_future_exceedance(const MarkModel& mark, double slope, double alpha,
                          std::size_t after_slot, RngStream& rng) {
  require(slope > 0.0, "no_future_exceedance: slope must be positive");
  require(alpha > 0.0, "no_future_exceedance: alpha must be positive");
  TailCache cache(mark, slope, alpha);
  return no_future_exceedance_impl(cache, after_slot, rng);
}

std::size_t next_exceedance_slot(const MarkModel& mark, double slope,
                                 double alpha, std::size_t after_slot,
                                 RngStream& rng) {
  require(slope > 0.0, "next_exceedance_slot: slope must be positive");
  require(alpha > 0.0, "next_exceedance_slot: alpha must be positive");
  TailCache cache(mark, slope, alpha);
  return next_exceedance_slot_impl(cache, after_slot, rng);
}

MarkBlock sample_marks(const MarkModel& mark, double slope, double alpha,
                       RngStream& rng, const MarkOptions& options) {
  require(slope > 0.0, "sample_marks: slope must be positive");
  require(alpha > 0.0, "sample_marks: alpha must be positive");
  TailCache cache(mark, slope, alpha);
  MarkBlock block;
  block.slope = slope;
  block.alpha = alpha;
  block.marks.push_back(mark.sample(rng));  // V_1; slot 0 is unconstrained.
  std::size_t last = 0;
  while (!no_future_exceedance_impl(cache, last, rng)) {
    const std::size_t slot = next_exceedance_slot_impl(cache, last, rng);
    for (std::size_t j = last + 1; j < slot; ++j) {
      block.marks.push_back(
          fill_at_or_below(mark, slope, alpha, j, rng, options));
    }
    block.marks.push_back(
        mark.sample_abs_gt(rng, slot_threshold(slope, alpha, slot)));
    block.exceed_slots.push_back(slot);
    last = slot;
  }
  block.kappa = block.exceed_slots.empty() ? 1 : block.exceed_slots.back() + 1;
  // Every slot up to the last exceedance slot is materialized (marks.size()
  // == kappa); close the block with the first certified fill, V_{kappa+1}.
  block.marks.push_back(fill_at_or_below(mark, slope, alpha, block.kappa, rng,
                                         options));
  return block;
}

void ensure_marks(MarkBlock& block, const MarkModel& mark, std::size_t count,
                  RngStream& rng, const MarkOptions& options) {
  require(block.slope > 0.0 && block.alpha > 0.0,
          "ensure_marks: block is not initialized");
  while (block.marks.size() < count) {
    const std::size_t slot = block.marks.size();  // mark V_{slot+1}
    block.marks.push_back(
        fill_at_or_below(mark, block.slope, block.alpha, slot, rng, options));
  }
}

void assert_mark_certificate(const MarkBlock& block, std::size_t from_slot) {
  if (block.kappa == 0 ||
      block.kappa != (block.exceed_slots.empty()
                          ? 1
                          : block.exceed_slots.back() + 1)) {
    throw std::logic_error("mark block certificate index is inconsistent");
  }
  for (std::size_t i = 1; i < block.exceed_slots.size(); ++i) {
    if (block.exceed_slots[i] <= block.exceed_slots[i - 1]) {
      throw std::logic_error("mark block exceedance slots are not increasing");
    }
  }
  std::size_t next_exceed = 0;  // index into exceed_slots
  for (std::size_t n = std::max<std::size_t>(from_slot, 1);
       n + 1 <= block.marks.size(); ++n) {
    while (next_exceed < block.exceed_slots.size() &&
           block.exceed_slots[next_exceed] < n) {
      ++next_exceed;
    }
    const bool is_exceed = next_exceed < block.exceed_slots.size() &&
                           block.exceed_slots[next_exceed] == n;
    const double threshold = slot_threshold(block.slope, block.alpha, n);
    const double v = std::fabs(block.marks[n]);  // marks[n] == V_{n+1}
    const double tol = 1e-12 * (1.0 + threshold);
    if (is_exceed) {
      if (!(v > threshold - tol)) {
        throw std::logic_error(
            "mark block violates its exceedance certificate (record too "
            "small)");
      }
    } else {
      if (!(v <= threshold + tol)) {
        throw std::logic_error(
            "mark block violates its growth certificate (fill too large)");
      }
    }
  }
}

}  // namespace stablepp
