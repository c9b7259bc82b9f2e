#include "stablepp/region_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stablepp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

RegionConfig make_region_config(
    std::shared_ptr<const InterArrivalModel> arrival,
    std::shared_ptr<const MarkModel> mark, double alpha,
    std::optional<double> epsilon) {
  require(arrival != nullptr, "make_region_config: arrival model is null");
  require(mark != nullptr, "make_region_config: mark model is null");
  require(alpha > 0.0, "make_region_config: alpha must be positive");
  RegionConfig config;
  config.arrival = std::move(arrival);
  config.mark = std::move(mark);
  config.alpha = alpha;
  config.tilt = epsilon.has_value() ? resolve_tilt(*config.arrival, *epsilon)
                                    : resolve_tilt_auto(*config.arrival);
  return config;
}

bool region_contains(double time, double value, double alpha) {
  return std::fabs(value) >= std::pow(std::fabs(time), alpha);
}

HalfRegionSample sample_region_half(const RegionConfig& config,
                                    std::uint64_t seed,
                                    std::uint64_t replication,
                                    Direction direction,
                                    std::optional<double> first_epoch) {
  require(config.arrival && config.mark, "sample_region_half: empty config");
  const bool fwd = direction == Direction::kForward;
  RngStream arrivals_rng(seed, replication,
                         fwd ? Purpose::kArrivalsFwd : Purpose::kArrivals);
  RngStream marks_rng(seed, replication,
                      fwd ? Purpose::kMarksFwd : Purpose::kMarks);
  RngStream coins_rng(seed, replication,
                      fwd ? Purpose::kCoinsFwd : Purpose::kCoins);

  HalfRegionSample half;
  half.direction = direction;
  half.marks = sample_marks(*config.mark, config.tilt.slope, config.alpha,
                            marks_rng, config.mark_options);
  half.arrivals = sample_arrivals(*config.arrival, config.tilt, arrivals_rng,
                                  coins_rng, first_epoch);
  half.kappa = std::max(half.arrivals.kappa, half.marks.kappa);
  // Materialize the scanned candidate range on both blocks: points
  // m = 1 .. kappa + 1.  Everything past that range is certified outside.
  ensure_epochs(half.arrivals, *config.arrival, config.tilt, half.kappa + 1,
                arrivals_rng, coins_rng);
  ensure_marks(half.marks, *config.mark, half.kappa + 1, marks_rng,
               config.mark_options);

  const double sign = fwd ? 1.0 : -1.0;
  for (std::size_t m = 1; m <= half.kappa + 1; ++m) {
    const double t = sign * half.arrivals.epochs[m - 1];
    const double v = half.marks.marks[m - 1];
    const bool in_region = region_contains(t, v, config.alpha);
    const bool admitted =
        config.predicate ? config.predicate(t, v) : in_region;
    if (admitted && !in_region) {
      throw std::invalid_argument(
          "region predicate admitted a point outside the stable region");
    }
    if (admitted) half.members.push_back({t, v});
  }
  // Backward times decrease with m; report members in increasing time order.
  if (!fwd) std::reverse(half.members.begin(), half.members.end());
  return half;
}

RegionSample sample_region(const RegionConfig& config, std::uint64_t seed,
                           std::uint64_t replication) {
  require(config.arrival && config.mark, "sample_region: empty config");
  RngStream straddle_rng(seed, replication, Purpose::kStraddle);
  RegionSample sample;
  // The renewal interval covering time zero is length-biased under the
  // stationary law; a uniform split places time zero inside it.  Conditional
  // on the straddle, both half sequences continue with plain renewal gaps.
  sample.straddle_length = config.arrival->sample_length_biased(straddle_rng);
  sample.straddle_split = straddle_rng.next_double();
  const double forward_first = sample.straddle_split * sample.straddle_length;
  const double backward_first =
      (1.0 - sample.straddle_split) * sample.straddle_length;

  sample.forward = sample_region_half(config, seed, replication,
                                      Direction::kForward, forward_first);
  sample.backward = sample_region_half(config, seed, replication,
                                       Direction::kBackward, backward_first);

  sample.members.reserve(sample.forward.members.size() +
                         sample.backward.members.size());
  sample.members.insert(sample.members.end(), sample.backward.members.begin(),
                        sample.backward.members.end());
  sample.members.insert(sample.members.end(), sample.forward.members.begin(),
                        sample.forward.members.end());
  return sample;
}

}  // namespace stablepp
