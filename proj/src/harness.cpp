#include "stablepp/harness.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stablepp/parallel.hpp"
#include "stablepp/stats.hpp"

namespace stablepp {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_config(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

void require_config(bool cond, const std::string& msg) {
  if (!cond) fail_config(msg);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// Consumption audit: debug builds log the draw counts of every
// randomness-consuming operation so exactness audits can reconcile them.
void audit_log(const char* op, std::size_t replications,
               double mean_uniforms) {
#ifndef NDEBUG
  std::fprintf(stderr, "[audit] %s: %zu replications, %.1f uniforms/replication\n",
               op, replications, mean_uniforms);
#else
  (void)op;
  (void)replications;
  (void)mean_uniforms;
#endif
}

// Shortest exact decimal representation: deterministic and lossless.
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Family factories
// ---------------------------------------------------------------------------

std::shared_ptr<const InterArrivalModel> build_arrival(const FamilySpec& spec) {
  const auto& p = spec.parameters;
  require_config(spec.weights.empty(),
                 "arrival family '" + spec.family + "' takes no weights");
  if (spec.family == "exponential") {
    require_config(p.size() == 1, "exponential arrivals need [rate]");
    return make_exponential_arrivals(p[0]);
  }
  if (spec.family == "gamma") {
    require_config(p.size() == 2, "gamma arrivals need [shape, rate]");
    return make_gamma_arrivals(p[0], p[1]);
  }
  if (spec.family == "deterministic") {
    require_config(p.size() == 1, "deterministic arrivals need [value]");
    return make_deterministic_arrivals(p[0]);
  }
  if (spec.family == "shifted-exponential") {
    require_config(p.size() == 2,
                   "shifted-exponential arrivals need [shift, rate]");
    return make_shifted_exponential_arrivals(p[0], p[1]);
  }
  fail_config("unknown arrival family '" + spec.family + "'");
}

std::shared_ptr<const MarkModel> build_mark(const FamilySpec& spec) {
  const auto& p = spec.parameters;
  if (spec.family == "discrete") {
    require_config(!p.empty(), "discrete marks need atom values");
    require_config(spec.weights.size() == p.size(),
                   "discrete marks need one weight per atom value");
    return make_discrete_mark(p, spec.weights);
  }
  require_config(spec.weights.empty(),
                 "mark family '" + spec.family + "' takes no weights");
  if (spec.family == "lognormal") {
    require_config(p.size() == 2, "lognormal marks need [log_mean, log_sd]");
    return make_lognormal_mark(p[0], p[1]);
  }
  if (spec.family == "exponential") {
    require_config(p.size() == 1, "exponential marks need [rate]");
    return make_exponential_mark(p[0]);
  }
  if (spec.family == "gamma") {
    require_config(p.size() == 2, "gamma marks need [shape, rate]");
    return make_gamma_mark(p[0], p[1]);
  }
  if (spec.family == "uniform") {
    require_config(p.size() == 2, "uniform marks need [lo, hi]");
    return make_uniform_mark(p[0], p[1]);
  }
  fail_config("unknown mark family '" + spec.family + "'");
}

// ---------------------------------------------------------------------------
// JSON schema helpers
// ---------------------------------------------------------------------------

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail_config("unknown key '" + it.key() + "' in " + where);
    }
  }
}

double read_number(const json& j, const char* where) {
  require_config(j.is_number(), std::string(where) + " must be a number");
  return j.get<double>();
}

std::uint64_t read_unsigned(const json& j, const char* where) {
  require_config(j.is_number_unsigned(),
                 std::string(where) + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string read_string(const json& j, const char* where) {
  require_config(j.is_string(), std::string(where) + " must be a string");
  return j.get<std::string>();
}

std::vector<double> read_number_array(const json& j, const char* where) {
  require_config(j.is_array(), std::string(where) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    out.push_back(read_number(e, where));
  }
  return out;
}

FamilySpec parse_family(const json& j, const char* where) {
  require_config(j.is_object(), std::string(where) + " must be an object");
  check_keys(j, {"family", "parameters", "weights"}, where);
  require_config(j.contains("family"),
                 std::string(where) + " needs a 'family' name");
  FamilySpec out;
  out.family = read_string(j.at("family"), where);
  if (j.contains("parameters")) {
    out.parameters = read_number_array(j.at("parameters"), where);
  }
  if (j.contains("weights")) {
    out.weights = read_number_array(j.at("weights"), where);
  }
  return out;
}

ordered_json family_to_json(const FamilySpec& spec) {
  ordered_json j;
  j["family"] = spec.family;
  j["parameters"] = spec.parameters;
  if (!spec.weights.empty()) {
    j["weights"] = spec.weights;
  }
  return j;
}

std::string family_str(const FamilySpec& spec) {
  std::string out = spec.family + "(";
  for (std::size_t i = 0; i < spec.parameters.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(spec.parameters[i]);
  }
  out += ")";
  if (!spec.weights.empty()) {
    out += "/weights(";
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
      if (i) out += ",";
      out += fmt_double(spec.weights[i]);
    }
    out += ")";
  }
  return out;
}

std::string scenario_header(const char* op, const ExperimentConfig& config) {
  std::string out;
  out += std::string("# stablepp ") + op + "\n";
  out += "# scenario=" + (config.scenario.empty() ? "-" : config.scenario) +
         " seed=" + std::to_string(config.seed) +
         " replications=" + std::to_string(config.replications) + "\n";
  out += "# arrival=" + family_str(config.arrival) +
         " mark=" + family_str(config.mark) +
         " lambda=" + fmt_double(config.lambda) +
         " nu=" + fmt_double(config.nu) +
         " alpha=" + fmt_double(config.alpha) +
         " epsilon_fraction=" + fmt_double(config.epsilon_fraction) + "\n";
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail_config(std::string("invalid JSON: ") + e.what());
  }
  require_config(j.is_object(), "top level must be a JSON object");
  check_keys(j,
             {"scenario", "system", "seed", "replications", "test_level",
              "output", "horizons", "bias_targets", "budget", "batch_count",
              "grid", "mutations"},
             "config");

  ExperimentConfig c;
  if (j.contains("scenario")) c.scenario = read_string(j["scenario"], "scenario");

  require_config(j.contains("system"), "a 'system' object is required");
  const json& sys = j.at("system");
  require_config(sys.is_object(), "'system' must be an object");
  check_keys(sys, {"arrival", "mark", "lambda", "nu", "alpha",
                   "epsilon_fraction"},
             "system");
  require_config(sys.contains("arrival"), "system needs an 'arrival' family");
  require_config(sys.contains("mark"), "system needs a 'mark' family");
  c.arrival = parse_family(sys.at("arrival"), "system.arrival");
  c.mark = parse_family(sys.at("mark"), "system.mark");
  if (sys.contains("lambda")) c.lambda = read_number(sys["lambda"], "lambda");
  if (sys.contains("nu")) c.nu = read_number(sys["nu"], "nu");
  if (sys.contains("alpha")) c.alpha = read_number(sys["alpha"], "alpha");
  if (sys.contains("epsilon_fraction")) {
    c.epsilon_fraction =
        read_number(sys["epsilon_fraction"], "epsilon_fraction");
  }

  if (j.contains("seed")) c.seed = read_unsigned(j["seed"], "seed");
  if (j.contains("replications")) {
    c.replications =
        static_cast<std::size_t>(read_unsigned(j["replications"], "replications"));
  }
  if (j.contains("test_level")) {
    c.test_level = read_number(j["test_level"], "test_level");
    require_config(c.test_level > 0.0 && c.test_level < 1.0,
                   "test_level must lie in (0, 1)");
  }
  if (j.contains("output")) c.output_path = read_string(j["output"], "output");

  if (j.contains("horizons")) {
    const json& hs = j.at("horizons");
    require_config(hs.is_array(), "horizons must be an array");
    c.horizons.clear();
    for (const auto& h : hs) {
      c.horizons.push_back(
          static_cast<std::size_t>(read_unsigned(h, "horizons entry")));
    }
  }
  if (j.contains("bias_targets")) {
    c.bias_targets = read_number_array(j["bias_targets"], "bias_targets");
  }
  if (j.contains("budget")) {
    c.budget = static_cast<std::size_t>(read_unsigned(j["budget"], "budget"));
  }
  if (j.contains("batch_count")) {
    c.batch_count =
        static_cast<std::size_t>(read_unsigned(j["batch_count"], "batch_count"));
  }
  if (j.contains("grid")) {
    const json& grid = j.at("grid");
    require_config(grid.is_array(), "grid must be an array of [lambda, nu]");
    for (const auto& cell : grid) {
      require_config(cell.is_array() && cell.size() == 2,
                     "each grid cell must be [lambda, nu]");
      c.grid.push_back({read_number(cell[0], "grid lambda"),
                        read_number(cell[1], "grid nu")});
    }
  }
  if (j.contains("mutations")) {
    const json& mut = j.at("mutations");
    require_config(mut.is_object(), "'mutations' must be an object");
    check_keys(mut, {"skip_mark_extension", "nominal_fill"}, "mutations");
    if (mut.contains("skip_mark_extension")) {
      require_config(mut["skip_mark_extension"].is_boolean(),
                     "skip_mark_extension must be a boolean");
      c.mutate_skip_mark_extension = mut["skip_mark_extension"].get<bool>();
    }
    if (mut.contains("nominal_fill")) {
      require_config(mut["nominal_fill"].is_boolean(),
                     "nominal_fill must be a boolean");
      c.mutate_nominal_fill = mut["nominal_fill"].get<bool>();
    }
  }
  return c;
}

std::string serialize_config(const ExperimentConfig& config) {
  ordered_json j;
  j["scenario"] = config.scenario;
  ordered_json sys;
  sys["arrival"] = family_to_json(config.arrival);
  sys["mark"] = family_to_json(config.mark);
  sys["lambda"] = config.lambda;
  sys["nu"] = config.nu;
  sys["alpha"] = config.alpha;
  sys["epsilon_fraction"] = config.epsilon_fraction;
  j["system"] = sys;
  j["seed"] = config.seed;
  j["replications"] = config.replications;
  j["test_level"] = config.test_level;
  j["output"] = config.output_path;
  j["horizons"] = config.horizons;
  j["bias_targets"] = config.bias_targets;
  j["budget"] = config.budget;
  j["batch_count"] = config.batch_count;
  ordered_json grid = ordered_json::array();
  for (const GridPoint& g : config.grid) {
    grid.push_back(ordered_json::array({g.lambda, g.nu}));
  }
  j["grid"] = grid;
  ordered_json mut;
  mut["skip_mark_extension"] = config.mutate_skip_mark_extension;
  mut["nominal_fill"] = config.mutate_nominal_fill;
  j["mutations"] = mut;
  return j.dump(2) + "\n";
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_config("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ScaledSystem system_from_config(const ExperimentConfig& config) {
  return make_system(build_arrival(config.arrival), build_mark(config.mark),
                     config.lambda, config.nu, config.epsilon_fraction);
}

QueueOptions queue_options_from_config(const ExperimentConfig& config) {
  QueueOptions options;
  options.skip_mark_extension = config.mutate_skip_mark_extension;
  options.mark_options.nominal_fill = config.mutate_nominal_fill;
  return options;
}

RegionConfig region_from_config(const ExperimentConfig& config) {
  const ScaledSystem system = system_from_config(config);
  RegionConfig region = make_region_config(
      system.arrival, system.mark, config.alpha,
      config.epsilon_fraction * system.arrival->mean());
  region.mark_options = queue_options_from_config(config).mark_options;
  return region;
}

// ---------------------------------------------------------------------------
// Bias benchmark
// ---------------------------------------------------------------------------

BiasReport run_bias_benchmark(const ExperimentConfig& config) {
  require_config(config.arrival.family == "exponential",
                 "bias benchmark needs Poisson arrivals (the exact stationary "
                 "mean is the reference value)");
  require_config(!config.horizons.empty(), "bias benchmark needs horizons");
  for (std::size_t i = 0; i + 1 < config.horizons.size(); ++i) {
    require_config(config.horizons[i] < config.horizons[i + 1],
                   "horizons must be strictly increasing");
  }
  require_config(config.horizons.front() >= 1, "horizons must be >= 1");
  require_config(config.replications >= 2,
                 "bias benchmark needs >= 2 replications");

  const ScaledSystem system = system_from_config(config);
  const std::size_t reps = config.replications;
  Stopwatch watch;
  const auto per_rep = run_replications(reps, [&](std::size_t rep) {
    return transient_checkpoint_averages(system, config.horizons, std::nullopt,
                                         config.seed, rep);
  });
  const double elapsed = watch.seconds();

  BiasReport report;
  report.stationary_mean = system.mean_occupancy();
  report.replications = reps;
  report.seconds_per_replication = elapsed / static_cast<double>(reps);
  for (std::size_t h = 0; h < config.horizons.size(); ++h) {
    std::vector<double> values(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) values[rep] = per_rep[rep][h];
    const MeanSe ms = mean_and_se(values);
    BiasRow row;
    row.horizon = config.horizons[h];
    row.mean = ms.mean;
    row.se = ms.se;
    row.relative_bias =
        std::fabs(ms.mean - report.stationary_mean) / report.stationary_mean;
    row.relative_se = ms.se / report.stationary_mean;
    report.rows.push_back(row);
  }
  for (const double target : config.bias_targets) {
    std::size_t crossing = 0;
    for (const BiasRow& row : report.rows) {
      if (row.relative_bias <= target) {
        crossing = row.horizon;
        break;
      }
    }
    report.crossings.emplace_back(target, crossing);
  }
  audit_log("bias benchmark (forward runs)", reps, 0.0);
  return report;
}

// ---------------------------------------------------------------------------
// Batch-means comparison
// ---------------------------------------------------------------------------

namespace {

BatchMeansSide batch_side(std::size_t arrivals, const TransientResult& run) {
  const MeanSe ms = mean_and_se(run.batch_means);
  BatchMeansSide side;
  side.arrivals = arrivals;
  side.batches = ms.n;
  side.mean = ms.mean;
  side.batch_sd = ms.sd;
  side.se = ms.se;
  return side;
}

}  // namespace

BatchMeansReport run_batch_means_comparison(const ExperimentConfig& config) {
  require_config(config.arrival.family == "exponential",
                 "batch-means comparison needs Poisson arrivals (the exact "
                 "stationary mean is the reference value)");
  require_config(config.replications >= 1,
                 "batch-means comparison needs a pilot (replications >= 1)");
  require_config(config.batch_count >= 2,
                 "batch-means comparison needs >= 2 batches");
  require_config(config.budget >= config.batch_count,
                 "arrival budget must cover at least one arrival per batch");

  const ScaledSystem system = system_from_config(config);
  const std::size_t pilot = config.replications;
  const auto pilot_states = run_replications(pilot, [&](std::size_t rep) {
    return sample_stationary_queue(system, config.seed, rep);
  });
  KahanSum kappa_sum;
  KahanSum uniform_sum;
  for (const QueueState& state : pilot_states) {
    kappa_sum.add(static_cast<double>(state.arrivals_simulated));
    uniform_sum.add(static_cast<double>(state.uniforms_consumed));
  }
  const double mean_kappa = kappa_sum.value() / static_cast<double>(pilot);
  audit_log("batch-means pilot (exact draws)", pilot,
            uniform_sum.value() / static_cast<double>(pilot));

  const auto consumed = static_cast<std::size_t>(std::llround(mean_kappa));
  require_config(
      config.budget > consumed,
      "arrival budget " + std::to_string(config.budget) +
          " does not exceed the exact sampler's mean arrival consumption " +
          std::to_string(consumed) +
          "; the equal-budget exact-start run would have no arrivals left");
  const std::size_t exact_budget = config.budget - consumed;

  TransientOptions options;
  options.batch_count = config.batch_count;
  // Replication indices `pilot` and `pilot + 1` keep the two runs' streams
  // disjoint from the pilot's and from each other.
  const TransientResult empty_run = simulate_transient_arrivals(
      system, config.budget, std::nullopt, config.seed, pilot, options);
  const QueueState start =
      sample_stationary_queue(system, config.seed, pilot + 1);
  const TransientResult exact_run = simulate_transient_arrivals(
      system, exact_budget, start, config.seed, pilot + 1, options);
  audit_log("batch-means forward runs", 2,
            0.5 * static_cast<double>(empty_run.uniforms_consumed +
                                      exact_run.uniforms_consumed +
                                      start.uniforms_consumed));

  BatchMeansReport report;
  report.stationary_mean = system.mean_occupancy();
  report.mean_kappa = mean_kappa;
  report.pilot_replications = pilot;
  report.empty_start = batch_side(config.budget, empty_run);
  report.exact_start = batch_side(exact_budget, exact_run);
  return report;
}

// ---------------------------------------------------------------------------
// Sensitivity table
// ---------------------------------------------------------------------------

std::vector<SensitivityRow> run_sensitivity_table(
    const ExperimentConfig& config) {
  require_config(config.arrival.family != "deterministic",
                 "sensitivity analysis needs a continuous inter-arrival law");
  require_config(config.replications >= 2,
                 "sensitivity analysis needs >= 2 replications");
  const auto base_arrival = build_arrival(config.arrival);
  const auto base_mark = build_mark(config.mark);
  std::vector<GridPoint> grid = config.grid;
  if (grid.empty()) grid.push_back({config.lambda, config.nu});

  std::vector<SensitivityRow> rows;
  rows.reserve(grid.size());
  for (const GridPoint& cell : grid) {
    const ScaledSystem system = make_system(
        base_arrival, base_mark, cell.lambda, cell.nu, config.epsilon_fraction);
    SensitivityRow row;
    row.lambda = cell.lambda;
    row.nu = cell.nu;
    row.estimate =
        ipa_sensitivities(system, config.seed, config.replications);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Validation battery
// ---------------------------------------------------------------------------

BatteryReport run_validation_battery(const ExperimentConfig& config) {
  require_config(config.arrival.family == "exponential",
                 "validation battery needs Poisson arrivals (the occupancy "
                 "law is Poisson only then)");
  require_config(config.replications >= 100,
                 "validation battery needs >= 100 replications");

  const ScaledSystem system = system_from_config(config);
  const QueueOptions options = queue_options_from_config(config);
  const std::size_t reps = config.replications;
  Stopwatch watch;
  const auto states = run_replications(reps, [&](std::size_t rep) {
    return sample_stationary_queue(system, config.seed, rep, options);
  });
  const double elapsed = watch.seconds();

  std::vector<std::size_t> occupancy;
  std::vector<std::size_t> coin_counts;  // shifted to {0, 1, ...}
  std::vector<double> residuals;
  std::vector<double> ages;
  occupancy.reserve(reps);
  coin_counts.reserve(reps);
  ages.reserve(reps);
  KahanSum uniform_sum;
  KahanSum coin_sum;
  for (const QueueState& state : states) {
    occupancy.push_back(state.occupancy());
    coin_counts.push_back(state.coin_flips - 1);
    coin_sum.add(static_cast<double>(state.coin_flips));
    ages.push_back(state.age);
    for (const Customer& c : state.customers) residuals.push_back(c.residual);
    uniform_sum.add(static_cast<double>(state.uniforms_consumed));
  }
  require_config(!residuals.empty(),
                 "validation battery observed no customers; raise lambda or "
                 "replications");

  BatteryReport report;
  report.level = config.test_level;
  report.replications = reps;
  report.mean_uniforms = uniform_sum.value() / static_cast<double>(reps);
  report.seconds_per_replication = elapsed / static_cast<double>(reps);

  {
    const double mean_occ = system.mean_occupancy();
    const Chi2Result r = chi2_discrete_gof(
        occupancy,
        [mean_occ](std::size_t k) { return poisson_pmf(k, mean_occ); });
    report.tests.push_back({"occupancy-poisson-chi2", r.statistic, r.p_value,
                            r.p_value > config.test_level});
  }
  {
    const MarkModel& mark = *system.mark;
    const double mean_service = mark.mean();
    const double stat =
        ks_statistic(residuals, [&mark, mean_service](double r) {
          return r <= 0.0 ? 0.0 : 1.0 - mark.integrated_tail(r) / mean_service;
        });
    const double p = ks_p_value(stat, residuals.size());
    report.tests.push_back(
        {"residual-ks", stat, p, p > config.test_level});
  }
  {
    const InterArrivalModel& x = *system.arrival;
    const double mean_gap = x.mean();
    const double stat = ks_statistic(ages, [&x, mean_gap](double a) {
      return a <= 0.0 ? 0.0 : 1.0 - x.integrated_tail(a) / mean_gap;
    });
    const double p = ks_p_value(stat, ages.size());
    report.tests.push_back({"age-ks", stat, p, p > config.test_level});
  }
  {
    // Certification coin counts live on {1, 2, ...}; the shifted counts are
    // geometric on {0, 1, ...} with success probability estimated by maximum
    // likelihood (hence one estimated parameter in the chi-square dof).
    const double mean_coins = coin_sum.value() / static_cast<double>(reps);
    const double phat = 1.0 / mean_coins;
    const Chi2Result r = chi2_discrete_gof(
        coin_counts,
        [phat](std::size_t k) {
          return phat * std::pow(1.0 - phat, static_cast<double>(k));
        },
        1);
    report.tests.push_back({"walk-coins-geometric", r.statistic, r.p_value,
                            r.p_value > config.test_level});
  }

  report.all_pass = true;
  for (const BatteryTest& t : report.tests) report.all_pass &= t.pass;
  audit_log("validation battery (exact draws)", reps, report.mean_uniforms);
  return report;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

std::string battery_report_json(const BatteryReport& report,
                                const ExperimentConfig& config) {
  ordered_json j;
  j["scenario"] = config.scenario;
  j["seed"] = config.seed;
  j["replications"] = report.replications;
  j["level"] = report.level;
  ordered_json mut;
  mut["skip_mark_extension"] = config.mutate_skip_mark_extension;
  mut["nominal_fill"] = config.mutate_nominal_fill;
  j["mutations"] = mut;
  ordered_json tests = ordered_json::array();
  for (const BatteryTest& t : report.tests) {
    ordered_json tj;
    tj["name"] = t.name;
    tj["statistic"] = t.statistic;
    tj["p_value"] = t.p_value;
    tj["pass"] = t.pass;
    tests.push_back(tj);
  }
  j["tests"] = tests;
  j["all_pass"] = report.all_pass;
  j["mean_uniforms_per_replication"] = report.mean_uniforms;
  return j.dump(2) + "\n";
}

std::string bias_report_csv(const BiasReport& report,
                            const ExperimentConfig& config) {
  std::string out = scenario_header("bias benchmark (empty-start forward runs)",
                                    config);
  out += "# stationary_mean=" + fmt_double(report.stationary_mean) + "\n";
  out += "horizon,mean,se,relative_bias,relative_se\n";
  for (const BiasRow& row : report.rows) {
    out += std::to_string(row.horizon) + "," + fmt_double(row.mean) + "," +
           fmt_double(row.se) + "," + fmt_double(row.relative_bias) + "," +
           fmt_double(row.relative_se) + "\n";
  }
  out += "# crossings (target,smallest horizon with relative_bias <= target; "
         "0 = none)\n";
  for (const auto& [target, horizon] : report.crossings) {
    out += "# crossing," + fmt_double(target) + "," +
           std::to_string(horizon) + "\n";
  }
  return out;
}

std::string batch_means_csv(const BatchMeansReport& report,
                            const ExperimentConfig& config) {
  std::string out =
      scenario_header("batch-means comparison (equal arrival budget)", config);
  out += "# stationary_mean=" + fmt_double(report.stationary_mean) +
         " mean_kappa=" + fmt_double(report.mean_kappa) +
         " pilot_replications=" + std::to_string(report.pilot_replications) +
         "\n";
  out += "# batch means use " + std::to_string(config.batch_count) +
         " equal-size arrival batches; the remainder past the last full "
         "batch is discarded\n";
  out += "start,arrivals,batches,mean,batch_sd,se\n";
  const auto line = [&](const char* name, const BatchMeansSide& side) {
    return std::string(name) + "," + std::to_string(side.arrivals) + "," +
           std::to_string(side.batches) + "," + fmt_double(side.mean) + "," +
           fmt_double(side.batch_sd) + "," + fmt_double(side.se) + "\n";
  };
  out += line("empty", report.empty_start);
  out += line("exact", report.exact_start);
  return out;
}

std::string sensitivity_csv(const std::vector<SensitivityRow>& rows,
                            const ExperimentConfig& config) {
  std::string out =
      scenario_header("sensitivity table (IPA derivative estimates)", config);
  out += "# replications exclude empty draws for the mean-residual family; "
         "empty draws enter the max-residual family as zeros\n";
  out += "lambda,nu,d_lambda_mean_residual,d_lambda_mean_residual_se,"
         "d_nu_mean_residual,d_nu_mean_residual_se,"
         "d_lambda_max_residual,d_lambda_max_residual_se,"
         "d_nu_max_residual,d_nu_max_residual_se,"
         "mean_occupancy,replications,flagged_empty\n";
  for (const SensitivityRow& row : rows) {
    const SensitivityEstimate& e = row.estimate;
    out += fmt_double(row.lambda) + "," + fmt_double(row.nu) + "," +
           fmt_double(e.d_lambda_mean_residual.value) + "," +
           fmt_double(e.d_lambda_mean_residual.se) + "," +
           fmt_double(e.d_nu_mean_residual.value) + "," +
           fmt_double(e.d_nu_mean_residual.se) + "," +
           fmt_double(e.d_lambda_max_residual.value) + "," +
           fmt_double(e.d_lambda_max_residual.se) + "," +
           fmt_double(e.d_nu_max_residual.value) + "," +
           fmt_double(e.d_nu_max_residual.se) + "," +
           fmt_double(e.mean_occupancy) + "," +
           std::to_string(e.replications) + "," + std::to_string(e.flagged) +
           "\n";
  }
  return out;
}

std::string sample_queue_csv(const ExperimentConfig& config) {
  require_config(config.replications >= 1, "sample-queue needs replications");
  const ScaledSystem system = system_from_config(config);
  const QueueOptions options = queue_options_from_config(config);
  const auto states = run_replications(config.replications, [&](std::size_t rep) {
    return sample_stationary_queue(system, config.seed, rep, options);
  });

  std::string out =
      scenario_header("sample-queue (exact stationary draws)", config);
  out += "# one row per customer in service; empty replications emit one row "
         "with occupancy=0 and blank customer fields\n";
  out += "replication,process_age,occupancy,kappa,customer_age,service,"
         "residual\n";
  KahanSum uniform_sum;
  for (std::size_t rep = 0; rep < states.size(); ++rep) {
    const QueueState& s = states[rep];
    uniform_sum.add(static_cast<double>(s.uniforms_consumed));
    const std::string prefix = std::to_string(rep) + "," +
                               fmt_double(s.age) + "," +
                               std::to_string(s.occupancy()) + "," +
                               std::to_string(s.kappa);
    if (s.customers.empty()) {
      out += prefix + ",,,\n";
      continue;
    }
    for (const Customer& c : s.customers) {
      out += prefix + "," + fmt_double(c.age) + "," + fmt_double(c.service) +
             "," + fmt_double(c.residual) + "\n";
    }
  }
  audit_log("sample-queue (exact draws)", states.size(),
            uniform_sum.value() / static_cast<double>(states.size()));
  return out;
}

std::string sample_region_csv(const ExperimentConfig& config) {
  require_config(config.replications >= 1, "sample-region needs replications");
  const RegionConfig region = region_from_config(config);
  const auto samples = run_replications(config.replications, [&](std::size_t rep) {
    return sample_region(region, config.seed, rep);
  });

  std::string out = scenario_header(
      "sample-region (two-sided stationary restriction to |v| >= |t|^alpha)",
      config);
  out += "# one row per admitted point; replications with no points emit one "
         "row with blank t,v\n";
  out += "replication,t,v,kappa_backward,kappa_forward\n";
  for (std::size_t rep = 0; rep < samples.size(); ++rep) {
    const RegionSample& s = samples[rep];
    const std::string suffix = "," + std::to_string(s.backward.kappa) + "," +
                               std::to_string(s.forward.kappa) + "\n";
    if (s.members.empty()) {
      out += std::to_string(rep) + ",," + suffix;
      continue;
    }
    for (const MarkedPoint& p : s.members) {
      out += std::to_string(rep) + "," + fmt_double(p.time) + "," +
             fmt_double(p.value) + suffix;
    }
  }
  return out;
}

}  // namespace stablepp
