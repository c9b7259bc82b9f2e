#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stablepp/distributions.hpp"
#include "stablepp/infinite_server.hpp"
#include "stablepp/region_sampler.hpp"

namespace stablepp {

// Experiment configuration, benchmark suite, and validation battery.
//
// A single JSON config file describes a scenario: the base distribution
// families, the (lambda, nu, alpha, epsilon) scaling policy, replication
// budget, seed, and per-operation knobs.  Every operation below is a pure
// function of (config) — all randomness is keyed by (config.seed,
// replication, purpose) — so every reported number is reproducible and the
// CSV/JSON writers emit byte-identical output for identical configs.

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

// One distribution family plus its parameters.
//
// Arrival families (unit-mean bases; the system scales times by 1/lambda):
//   "exponential" [rate]           — Exp(rate) inter-arrivals
//   "gamma" [shape, rate]          — Gamma(shape, rate)
//   "deterministic" [value]        — point mass
//   "shifted-exponential" [shift, rate]
// Mark families (the system scales values by 1/nu):
//   "lognormal" [log_mean, log_sd]
//   "exponential" [rate]
//   "gamma" [shape, rate]
//   "uniform" [lo, hi]
//   "discrete" parameters = atom values, weights = probabilities
struct FamilySpec {
  std::string family;
  std::vector<double> parameters;
  std::vector<double> weights;  // "discrete" family only

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

// One (lambda, nu) cell of the sensitivity grid.
struct GridPoint {
  double lambda = 0.0;
  double nu = 0.0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct ExperimentConfig {
  std::string scenario;  // free-form label echoed into outputs
  FamilySpec arrival;
  FamilySpec mark;
  double lambda = 1.0;
  double nu = 1.0;
  double alpha = 1.0;            // region exponent; the queue projection is 1
  double epsilon_fraction = 0.5;  // tilt epsilon as a fraction of the mean
  std::uint64_t seed = 0;
  std::size_t replications = 1000;
  double test_level = 0.01;  // significance level for the battery
  std::string output_path;   // default --out target; empty = stdout

  // Bias benchmark: arrival-count horizons (strictly increasing) and the
  // relative-bias targets whose crossing horizons are reported.
  std::vector<std::size_t> horizons{600, 1000, 5000};
  std::vector<double> bias_targets{0.10, 0.05, 0.01};

  // Batch-means comparison: total arrival budget and batch count.
  std::size_t budget = 10000;
  std::size_t batch_count = 30;

  // Sensitivity grid; empty = the single point (lambda, nu).
  std::vector<GridPoint> grid;

  // Fault-injection switches for the validation battery.  These deliberately
  // break exactness so the battery can prove its tests catch such bugs.
  bool mutate_skip_mark_extension = false;
  bool mutate_nominal_fill = false;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// JSON (de)serialization.  parse_config(serialize_config(c)) == c for every
// valid config; unknown keys are rejected so typos cannot silently change an
// experiment.  Throws std::invalid_argument on malformed input.
ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig load_config_file(const std::string& path);

// Model construction from the config.  Throws std::invalid_argument for
// unknown family names or wrong parameter counts.
ScaledSystem system_from_config(const ExperimentConfig& config);
QueueOptions queue_options_from_config(const ExperimentConfig& config);
RegionConfig region_from_config(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Benchmark operations
// ---------------------------------------------------------------------------

// Empty-start bias curve: one forward run per replication, read at each
// configured horizon, compared against the exact stationary mean.
struct BiasRow {
  std::size_t horizon = 0;     // arrival count
  double mean = 0.0;           // across replications of the time average
  double se = 0.0;
  double relative_bias = 0.0;  // |mean - stationary| / stationary
  double relative_se = 0.0;    // se / stationary
};

struct BiasReport {
  double stationary_mean = 0.0;
  std::vector<BiasRow> rows;  // one per configured horizon, in order
  // (target, horizon): smallest configured horizon whose estimated relative
  // bias is <= target; horizon 0 when no configured horizon qualifies.
  std::vector<std::pair<double, std::size_t>> crossings;
  std::size_t replications = 0;
  double seconds_per_replication = 0.0;
};

BiasReport run_bias_benchmark(const ExperimentConfig& config);

// Equal-budget comparison: one long empty-start run over the full arrival
// budget n versus an exact-stationary-start run over n' = n - round(mean
// arrivals consumed by the exact sampler), the consumption being estimated
// by a pilot of config.replications exact draws.  Batch statistics use
// config.batch_count equal-size arrival batches (remainder discarded).
struct BatchMeansSide {
  std::size_t arrivals = 0;  // arrival budget of the run
  std::size_t batches = 0;
  double mean = 0.0;      // mean of batch means (time average of the run)
  double batch_sd = 0.0;  // standard deviation across batch means
  double se = 0.0;        // batch_sd / sqrt(batches)
};

struct BatchMeansReport {
  double stationary_mean = 0.0;
  double mean_kappa = 0.0;  // pilot mean of arrivals consumed per exact draw
  std::size_t pilot_replications = 0;
  BatchMeansSide empty_start;
  BatchMeansSide exact_start;
};

// Throws std::invalid_argument when the budget does not exceed the exact
// sampler's own arrival consumption (no arrivals would remain for the run).
BatchMeansReport run_batch_means_comparison(const ExperimentConfig& config);

// IPA steady-state derivative estimates over the configured (lambda, nu)
// grid.  Each cell reruns the full exact sampler at its own scaling.
struct SensitivityRow {
  double lambda = 0.0;
  double nu = 0.0;
  SensitivityEstimate estimate;
};

std::vector<SensitivityRow> run_sensitivity_table(
    const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Validation battery
// ---------------------------------------------------------------------------

// Statistical exactness checks for a Poisson-arrival scenario:
//   occupancy-poisson-chi2   occupancy vs Poisson(lambda E V)
//   residual-ks              pooled residuals vs the service equilibrium law
//   age-ks                   arrival age vs the inter-arrival equilibrium law
//   walk-coins-geometric     certification coin counts vs a geometric law
// A test passes when its p-value exceeds config.test_level.
struct BatteryTest {
  std::string name;
  double statistic = 0.0;
  double p_value = 0.0;
  bool pass = false;
};

struct BatteryReport {
  std::vector<BatteryTest> tests;
  double level = 0.0;
  bool all_pass = false;
  std::size_t replications = 0;
  double mean_uniforms = 0.0;  // consumption audit: mean draws / replication
  double seconds_per_replication = 0.0;
};

// Requires an "exponential" arrival family (the occupancy law is Poisson only
// then); throws std::invalid_argument otherwise.  Honors the mutation
// switches.
BatteryReport run_validation_battery(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Output writers (deterministic: identical config -> identical bytes)
// ---------------------------------------------------------------------------

std::string battery_report_json(const BatteryReport& report,
                                const ExperimentConfig& config);
std::string bias_report_csv(const BiasReport& report,
                            const ExperimentConfig& config);
std::string batch_means_csv(const BatchMeansReport& report,
                            const ExperimentConfig& config);
std::string sensitivity_csv(const std::vector<SensitivityRow>& rows,
                            const ExperimentConfig& config);

// Raw sample dumps for the CLI: exact stationary queue states (one row per
// customer in service) and two-sided region samples (one row per admitted
// point), each prefixed with self-describing `#` metadata lines.
std::string sample_queue_csv(const ExperimentConfig& config);
std::string sample_region_csv(const ExperimentConfig& config);

}  // namespace stablepp
