// stablepp command-line driver.
//
// Subcommands:
//   sample-region  draw exact stationary points of the restricted process
//   sample-queue   draw exact stationary infinite-server snapshots
//   sensitivity    pathwise steady-state derivative table over a (λ, ν) grid
//   benchmark      empty-start bias curve + equal-budget batch-means table
//   validate       statistical exactness battery (JSON report)
//
// Every subcommand takes --config (JSON experiment file) plus optional
// --seed/--reps/--out overrides.  Output goes to --out when given, else to
// the config's output path, else to stdout.  Identical config + seed yields
// byte-identical output.  Exit status: 0 on success, 1 on usage or
// configuration errors, 2 when `validate` finds a failing test.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "stablepp/harness.hpp"
#include "stablepp/parallel.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "Experiment configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "Override the configured seed");
  cmd->add_option("--reps", opts.reps,
                  "Override the configured replication count");
  cmd->add_option("--out", opts.out,
                  "Output file (default: config output path, else stdout)");
}

stablepp::ExperimentConfig load(const CommonOpts& opts) {
  stablepp::ExperimentConfig config =
      stablepp::load_config_file(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.reps) config.replications = static_cast<std::size_t>(*opts.reps);
  if (opts.out) config.output_path = *opts.out;
  return config;
}

// Writes `text` to `path`, or to stdout when the path is empty.
int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file '" << path << "'\n";
    return 1;
  }
  out << text;
  if (!out.good()) {
    std::cerr << "error: failed writing '" << path << "'\n";
    return 1;
  }
  return 0;
}

int run_sample_region(const CommonOpts& opts) {
  const stablepp::ExperimentConfig config = load(opts);
  return emit(stablepp::sample_region_csv(config), config.output_path);
}

int run_sample_queue(const CommonOpts& opts) {
  const stablepp::ExperimentConfig config = load(opts);
  return emit(stablepp::sample_queue_csv(config), config.output_path);
}

int run_sensitivity(const CommonOpts& opts) {
  const stablepp::ExperimentConfig config = load(opts);
  const auto rows = stablepp::run_sensitivity_table(config);
  return emit(stablepp::sensitivity_csv(rows, config), config.output_path);
}

int run_benchmark(const CommonOpts& opts) {
  const stablepp::ExperimentConfig config = load(opts);
  const stablepp::BiasReport bias = stablepp::run_bias_benchmark(config);
  std::cerr << "benchmark: bias curve done (" << bias.replications
            << " replications, " << bias.seconds_per_replication
            << " s/replication)\n";
  const stablepp::BatchMeansReport batch =
      stablepp::run_batch_means_comparison(config);
  const std::string text = stablepp::bias_report_csv(bias, config) + "\n" +
                           stablepp::batch_means_csv(batch, config);
  return emit(text, config.output_path);
}

int run_validate(const CommonOpts& opts) {
  const stablepp::ExperimentConfig config = load(opts);
  const stablepp::BatteryReport report =
      stablepp::run_validation_battery(config);
  std::cerr << "validate: " << report.replications << " replications, "
            << report.seconds_per_replication << " s/replication, "
            << stablepp::replication_threads() << " thread(s)\n";
  const int rc =
      emit(stablepp::battery_report_json(report, config), config.output_path);
  if (rc != 0) return rc;
  return report.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "stablepp: exact sampling for stationary marked renewal processes "
      "restricted to stable unbounded regions, with an exact infinite-server "
      "queue sampler and pathwise derivative estimators"};
  app.require_subcommand(0, 1);

  CommonOpts opts;
  CLI::App* region = app.add_subcommand(
      "sample-region", "Exact stationary points of the restricted process");
  CLI::App* queue = app.add_subcommand(
      "sample-queue", "Exact stationary infinite-server queue snapshots");
  CLI::App* sensitivity = app.add_subcommand(
      "sensitivity", "Steady-state derivative estimates over a (lambda, nu) grid");
  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "Empty-start bias curve and equal-budget batch-means table");
  CLI::App* validate = app.add_subcommand(
      "validate", "Statistical exactness battery (JSON report)");
  for (CLI::App* cmd : {region, queue, sensitivity, benchmark, validate}) {
    add_common(cmd, opts);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (region->parsed()) return run_sample_region(opts);
    if (queue->parsed()) return run_sample_queue(opts);
    if (sensitivity->parsed()) return run_sensitivity(opts);
    if (benchmark->parsed()) return run_benchmark(opts);
    if (validate->parsed()) return run_validate(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::cout << app.help();
  return 0;
}
