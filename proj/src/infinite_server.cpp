#include "stablepp/infinite_server.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

#include "stablepp/arrival_sequence.hpp"
#include "stablepp/stats.hpp"

namespace stablepp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Remaining time to the next arrival when the previous one happened `age`
// time units ago: the total gap is conditioned on exceeding the age, via the
// inverse transform on the restricted tail.  Consumes exactly one uniform on
// every path.
double forward_recurrence_gap(const InterArrivalModel& x, double age,
                              RngStream& rng) {
  const double u = rng.next_double();
  const double f = age > 0.0 ? x.cdf(age) : 0.0;
  if (f >= 1.0) return 0.0;  // age at the top of the support
  return std::max(0.0, x.quantile(f + u * (1.0 - f)) - age);
}

}  // namespace

double ScaledSystem::mean_occupancy() const {
  return mark->mean() / arrival->mean();
}

ScaledSystem make_system(std::shared_ptr<const InterArrivalModel> base_arrival,
                         std::shared_ptr<const MarkModel> base_mark,
                         double lambda, double nu, double epsilon_fraction) {
  require(base_arrival != nullptr, "make_system: arrival model is null");
  require(base_mark != nullptr, "make_system: mark model is null");
  require(lambda > 0.0, "make_system: lambda must be positive");
  require(nu > 0.0, "make_system: nu must be positive");
  require(epsilon_fraction > 0.0 && epsilon_fraction < 1.0,
          "make_system: epsilon_fraction must lie in (0, 1)");
  ScaledSystem sys;
  sys.base_arrival = std::move(base_arrival);
  sys.base_mark = std::move(base_mark);
  sys.lambda = lambda;
  sys.nu = nu;
  sys.epsilon_fraction = epsilon_fraction;
  sys.arrival = make_time_scaled(sys.base_arrival, 1.0 / lambda);
  sys.mark = make_mark_scaled(sys.base_mark, 1.0 / nu);
  sys.tilt =
      resolve_tilt(*sys.arrival, epsilon_fraction * sys.arrival->mean());
  return sys;
}

QueueState sample_stationary_queue(const ScaledSystem& system,
                                   std::uint64_t seed,
                                   std::uint64_t replication,
                                   const QueueOptions& options) {
  require(system.arrival && system.mark,
          "sample_stationary_queue: system not built via make_system");
  RngStream arrivals_rng(seed, replication, Purpose::kArrivals);
  RngStream marks_rng(seed, replication, Purpose::kMarks);
  RngStream coins_rng(seed, replication, Purpose::kCoins);

  MarkBlock marks = sample_marks(*system.mark, system.tilt.slope, 1.0,
                                 marks_rng, options.mark_options);
  ArrivalBlock arrivals =
      sample_arrivals(*system.arrival, system.tilt, arrivals_rng, coins_rng);
  // Certification-phase coin count: each passage coin in this phase is an
  // independent flip at the origin, so the count is geometric.  Extensions
  // below spend further coins with varying slack, which would dilute that
  // law, so the count is frozen here.
  const std::uint64_t certification_coins = arrivals.walk.coin_flips;
  const std::size_t kappa = std::max(marks.kappa, arrivals.kappa);
  ensure_epochs(arrivals, *system.arrival, system.tilt, kappa + 1,
                arrivals_rng, coins_rng);
  if (!options.skip_mark_extension) {
    ensure_marks(marks, *system.mark, kappa + 1, marks_rng,
                 options.mark_options);
  }

  QueueState state;
  state.age = arrivals.epochs[0];
  state.kappa = kappa;
  state.arrivals_simulated = arrivals.epochs.size();
  state.uniforms_consumed =
      arrivals_rng.draws() + marks_rng.draws() + coins_rng.draws();
  state.coin_flips = certification_coins;
  // Candidate scan: customer i is still in service iff its requirement
  // strictly exceeds its age.  Under the skip_mark_extension fault the scan
  // silently truncates at the marks that exist - exactly the bug the
  // validation battery must catch.
  const std::size_t scan = std::min(kappa, marks.marks.size());
  for (std::size_t i = 1; i <= scan; ++i) {
    const double age = arrivals.epochs[i - 1];
    const double service = marks.marks[i - 1];
    if (service > age) {
      state.customers.push_back({age, service, service - age});
    }
  }
  return state;
}

QueueFunctionals steady_state_functionals(const QueueState& state) {
  QueueFunctionals f;
  f.occupancy = state.customers.size();
  f.empty = state.customers.empty();
  if (f.empty) return f;
  KahanSum sum;
  double best = -std::numeric_limits<double>::infinity();
  for (const Customer& c : state.customers) {
    sum.add(c.residual);
    if (c.residual > best) best = c.residual;
  }
  f.mean_residual = sum.value() / static_cast<double>(f.occupancy);
  f.max_residual = best;
  return f;
}

SensitivitySample sensitivity_sample(const QueueState& state) {
  SensitivitySample s;
  s.occupancy = state.customers.size();
  s.empty = state.customers.empty();
  if (s.empty) return s;
  KahanSum ages, services, residuals;
  std::size_t best = 0;
  for (std::size_t i = 0; i < state.customers.size(); ++i) {
    const Customer& c = state.customers[i];
    ages.add(c.age);
    services.add(c.service);
    residuals.add(c.residual);
    if (c.residual > state.customers[best].residual) best = i;
  }
  const double n = static_cast<double>(s.occupancy);
  s.mean_age = ages.value() / n;
  s.mean_service = services.value() / n;
  s.mean_residual = residuals.value() / n;
  s.max_residual = state.customers[best].residual;
  s.argmax_age = state.customers[best].age;
  s.argmax_service = state.customers[best].service;
  // Elapsed + remaining = total, per customer and hence on averages and at
  // the argmax.  Violations mean corrupted state, not statistical noise.
  const double tol = 1e-9 * (1.0 + std::fabs(s.mean_service));
  if (std::fabs(s.mean_age + s.mean_residual - s.mean_service) > tol ||
      std::fabs(s.argmax_age + s.max_residual - s.argmax_service) >
          1e-9 * (1.0 + std::fabs(s.argmax_service))) {
    throw std::logic_error(
        "sensitivity_sample: elapsed + remaining != total requirement");
  }
  return s;
}

SensitivityEstimate ipa_sensitivities(const ScaledSystem& system,
                                      std::uint64_t seed,
                                      std::size_t replications,
                                      const QueueOptions& options) {
  require(replications >= 2, "ipa_sensitivities: need at least 2 replications");
  std::vector<double> mean_ages, mean_services, mean_residuals;
  std::vector<double> argmax_ages, argmax_services;
  std::vector<double> occupancies, max_residuals;
  mean_ages.reserve(replications);
  argmax_ages.reserve(replications);
  SensitivityEstimate est;
  est.replications = replications;
  for (std::size_t r = 0; r < replications; ++r) {
    const QueueState state =
        sample_stationary_queue(system, seed, r, options);
    const SensitivitySample s = sensitivity_sample(state);
    occupancies.push_back(static_cast<double>(s.occupancy));
    // Empty draws: the max over an empty profile is 0 and its pathwise
    // derivative is 0, so they stay in the max-residual averages; the
    // mean-residual target conditions on occupancy, so they are excluded.
    argmax_ages.push_back(s.argmax_age);
    argmax_services.push_back(s.argmax_service);
    max_residuals.push_back(s.max_residual);
    if (s.empty) {
      ++est.flagged;
      continue;
    }
    mean_ages.push_back(s.mean_age);
    mean_services.push_back(s.mean_service);
    mean_residuals.push_back(s.mean_residual);
  }
  require(mean_ages.size() >= 2,
          "ipa_sensitivities: fewer than 2 occupied replications");

  const MeanSe xi = mean_and_se(mean_ages);
  const MeanSe vbar = mean_and_se(mean_services);
  const MeanSe rbar = mean_and_se(mean_residuals);
  const MeanSe xi_max = mean_and_se(argmax_ages);
  const MeanSe v_max = mean_and_se(argmax_services);
  const MeanSe r_max = mean_and_se(max_residuals);
  const MeanSe occ = mean_and_se(occupancies);

  est.d_lambda_mean_residual = {xi.mean / system.lambda,
                                xi.se / system.lambda};
  est.d_nu_mean_residual = {-vbar.mean / system.nu, vbar.se / system.nu};
  est.d_lambda_max_residual = {xi_max.mean / system.lambda,
                               xi_max.se / system.lambda};
  est.d_nu_max_residual = {-v_max.mean / system.nu, v_max.se / system.nu};
  est.mean_occupancy = occ.mean;
  est.mean_mean_residual = rbar.mean;
  est.mean_max_residual = r_max.mean;
  return est;
}

// ---------------------------------------------------------------------------
// Forward transient simulation
// ---------------------------------------------------------------------------

namespace {

struct Departure {
  double time = 0.0;     // absolute departure epoch
  double arrival = 0.0;  // absolute arrival epoch (<= 0 for initial customers)
  bool operator>(const Departure& o) const {
    if (time != o.time) return time > o.time;
    return arrival > o.arrival;  // deterministic tie order
  }
};

using DepartureHeap =
    std::priority_queue<Departure, std::vector<Departure>, std::greater<>>;

struct EngineConfig {
  double time_limit = std::numeric_limits<double>::infinity();
  std::size_t arrival_limit = 0;            // 0 = no arrival stop
  std::vector<std::size_t> checkpoints;     // strictly increasing, arrival counts
  std::size_t batch_arrivals = 0;           // arrival-count batching (0 = off)
  std::vector<double> time_boundaries;      // time batching (empty = off)
  std::size_t batch_count = 0;
};

struct EngineResult {
  TransientResult out;
  std::vector<double> checkpoint_averages;
};

EngineResult run_engine(const ScaledSystem& system,
                        const std::optional<QueueState>& initial,
                        std::uint64_t seed, std::uint64_t replication,
                        const TransientOptions& options,
                        const EngineConfig& cfg) {
  RngStream rng(seed, replication, Purpose::kTransient);
  const auto f = options.functional
                     ? options.functional
                     : [](std::size_t q) { return static_cast<double>(q); };

  DepartureHeap heap;
  double initial_age = 0.0;
  if (initial.has_value()) {
    require(initial->age >= 0.0, "transient: initial age must be >= 0");
    initial_age = initial->age;
    for (const Customer& c : initial->customers) {
      require(c.residual > 0.0, "transient: initial residuals must be > 0");
      heap.push({c.residual, -c.age});
    }
  }

  double now = 0.0;
  double last_arrival = -initial_age;
  double f_current = f(heap.size());
  KahanSum integral;
  std::size_t arrivals = 0;
  std::size_t boundary_idx = 0;

  // (time, integral) at batch boundaries / arrival-batch marks.
  std::vector<std::pair<double, double>> batch_marks;
  std::vector<double> checkpoint_avgs;

  auto advance_to = [&](double t) {
    while (boundary_idx < cfg.time_boundaries.size() &&
           cfg.time_boundaries[boundary_idx] <= t) {
      const double b = cfg.time_boundaries[boundary_idx];
      integral.add(f_current * (b - now));
      now = b;
      batch_marks.emplace_back(now, integral.value());
      ++boundary_idx;
    }
    integral.add(f_current * (t - now));
    now = t;
  };

  double next_arrival = forward_recurrence_gap(*system.arrival, initial_age,
                                               rng);
  bool stopped = false;
  while (!stopped) {
    const double next_departure =
        heap.empty() ? std::numeric_limits<double>::infinity()
                     : heap.top().time;
    const double next_event = std::min(next_arrival, next_departure);
    if (next_event >= cfg.time_limit) {
      advance_to(cfg.time_limit);
      break;
    }
    advance_to(next_event);
    if (next_departure <= next_arrival) {
      heap.pop();  // departures first on (probability-zero) ties
      f_current = f(heap.size());
      continue;
    }
    // Arrival.
    ++arrivals;
    last_arrival = now;
    const double service = system.mark->sample(rng);
    heap.push({now + service, now});
    f_current = f(heap.size());
    if (cfg.batch_arrivals > 0 && arrivals % cfg.batch_arrivals == 0 &&
        batch_marks.size() < cfg.batch_count) {
      batch_marks.emplace_back(now, integral.value());
    }
    for (std::size_t c : cfg.checkpoints) {
      if (arrivals == c) {
        checkpoint_avgs.push_back(now > 0.0 ? integral.value() / now : 0.0);
      }
    }
    if (cfg.arrival_limit > 0 && arrivals == cfg.arrival_limit) {
      stopped = true;
      break;
    }
    next_arrival = now + system.arrival->sample(rng);
  }

  EngineResult result;
  result.checkpoint_averages = std::move(checkpoint_avgs);
  TransientResult& out = result.out;
  out.horizon = now;
  out.arrivals = arrivals;
  out.time_average = now > 0.0 ? integral.value() / now : f_current;

  // Batch means from consecutive (time, integral) marks.
  double t_prev = 0.0, i_prev = 0.0;
  for (const auto& [t, i] : batch_marks) {
    if (t > t_prev) out.batch_means.push_back((i - i_prev) / (t - t_prev));
    t_prev = t;
    i_prev = i;
  }

  // Snapshot at the horizon.
  out.final_state.age = now - last_arrival;
  out.final_state.arrivals_simulated = arrivals;
  while (!heap.empty()) {
    const Departure d = heap.top();
    heap.pop();
    if (d.time <= now) continue;  // departed exactly at the horizon
    Customer c;
    c.age = now - d.arrival;
    c.service = d.time - d.arrival;
    c.residual = d.time - now;
    out.final_state.customers.push_back(c);
  }
  std::sort(out.final_state.customers.begin(),
            out.final_state.customers.end(),
            [](const Customer& a, const Customer& b) { return a.age < b.age; });
  out.uniforms_consumed = rng.draws();
  return result;
}

}  // namespace

TransientResult simulate_transient_arrivals(
    const ScaledSystem& system, std::size_t arrivals,
    const std::optional<QueueState>& initial, std::uint64_t seed,
    std::uint64_t replication, const TransientOptions& options) {
  require(arrivals >= 1, "simulate_transient_arrivals: need >= 1 arrival");
  EngineConfig cfg;
  cfg.arrival_limit = arrivals;
  cfg.batch_count = options.batch_count;
  if (options.batch_count > 0) {
    cfg.batch_arrivals = arrivals / options.batch_count;  // remainder dropped
  }
  return run_engine(system, initial, seed, replication, options, cfg).out;
}

TransientResult simulate_transient_time(
    const ScaledSystem& system, double horizon,
    const std::optional<QueueState>& initial, std::uint64_t seed,
    std::uint64_t replication, const TransientOptions& options) {
  require(horizon > 0.0, "simulate_transient_time: horizon must be > 0");
  EngineConfig cfg;
  cfg.time_limit = horizon;
  cfg.batch_count = options.batch_count;
  for (std::size_t b = 1; b <= options.batch_count; ++b) {
    cfg.time_boundaries.push_back(horizon * static_cast<double>(b) /
                                  static_cast<double>(options.batch_count));
  }
  return run_engine(system, initial, seed, replication, options, cfg).out;
}

std::vector<double> transient_checkpoint_averages(
    const ScaledSystem& system, const std::vector<std::size_t>& checkpoints,
    const std::optional<QueueState>& initial, std::uint64_t seed,
    std::uint64_t replication, const TransientOptions& options) {
  require(!checkpoints.empty(), "transient_checkpoint_averages: no checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    require(checkpoints[i] >= 1 &&
                (i == 0 || checkpoints[i] > checkpoints[i - 1]),
            "transient_checkpoint_averages: checkpoints must be strictly "
            "increasing and >= 1");
  }
  EngineConfig cfg;
  cfg.arrival_limit = checkpoints.back();
  cfg.checkpoints = checkpoints;
  cfg.batch_count = 0;
  return run_engine(system, initial, seed, replication, options, cfg)
      .checkpoint_averages;
}

}  // namespace stablepp
