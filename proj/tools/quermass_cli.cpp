#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "quermass/experiments.hpp"

using namespace quermass;

namespace {

struct GlobalArgs {
  std::string config_path;
  long long seed = -1;
  std::string out_dir;
  int threads = 1;
};

void add_common(CLI::App* cmd, GlobalArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config_path, "experiment config JSON");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--out", args.out_dir, "override the output directory");
  cmd->add_option("--threads", args.threads, "worker threads for replicas");
}

experiments::ExperimentConfig load(const GlobalArgs& args) {
  auto config = experiments::ExperimentConfig::from_json_file(args.config_path);
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quermass germ-grain Gibbs model: sampling, percolation analysis, experiments"};
  app.require_subcommand(1);

  GlobalArgs sample_args, sweep_args, multitype_args, percolate_args;
  GlobalArgs validate_args;
  bool validate_quick = false;

  auto* sample = app.add_subcommand("sample", "run the chain; write trace CSV + final snapshot");
  add_common(sample, sample_args);
  auto* sweep = app.add_subcommand("sweep", "sweep z or a theta over replicas");
  add_common(sweep, sweep_args);
  auto* multitype = app.add_subcommand("multitype", "K-type run with the dominance statistic");
  add_common(multitype, multitype_args);
  auto* percolate = app.add_subcommand("percolate", "connectivity / site-field analysis");
  add_common(percolate, percolate_args);
  auto* validate_cmd = app.add_subcommand("validate", "run the property suite");
  validate_args.out_dir = "out";
  validate_cmd->add_option("--seed", validate_args.seed, "property corpus seed");
  validate_cmd->add_option("--out", validate_args.out_dir, "output directory");
  validate_cmd->add_option("--threads", validate_args.threads, "worker threads");
  validate_cmd->add_flag("--quick", validate_quick, "reduced corpus sizes for development");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) {
      experiments::cmd_sample(load(sample_args), sample_args.threads);
    } else if (sweep->parsed()) {
      experiments::cmd_sweep(load(sweep_args), sweep_args.threads);
    } else if (multitype->parsed()) {
      experiments::cmd_multitype(load(multitype_args), multitype_args.threads);
    } else if (percolate->parsed()) {
      experiments::cmd_percolate(load(percolate_args), percolate_args.threads);
    } else if (validate_cmd->parsed()) {
      validate::Options options;
      options.threads = validate_args.threads;
      if (validate_args.seed >= 0) options.seed = static_cast<std::uint64_t>(validate_args.seed);
      if (validate_quick) {
        options.oracle_configs = 50;
        options.identity_pairs = 100;
        options.bound_samples = 1000;
        options.perimeter_configs = 20;
        options.hole_configs = 20;
        options.poisson_steps = 200000;
        options.sandwich_replicas = 8;
        options.sandwich_steps = 50000;
      }
      const auto report = experiments::cmd_validate(options, validate_args.out_dir);
      for (const auto& check : report.checks)
        std::printf("%-28s %s  (%.1fs)  %s\n", check.name.c_str(),
                    check.skipped ? "SKIP" : (check.passed ? "PASS" : "FAIL"), check.seconds,
                    check.details.c_str());
      if (!report.all_passed()) return 1;
    }
  } catch (const experiments::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ExplosionGuard& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
