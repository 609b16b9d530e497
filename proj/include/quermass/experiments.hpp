#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quermass/params.hpp"
#include "quermass/percolation.hpp"
#include "quermass/sampler.hpp"
#include "quermass/validate.hpp"

namespace quermass::experiments {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One experiment description: model + window + chain schedule + optional
/// sweep + analysis options, parsed from a single JSON document.
struct ExperimentConfig {
  QuermassParams model;
  int K = 1;
  BoundaryKind boundary_kind = BoundaryKind::free_boundary;
  std::string boundary_snapshot_path;
  Rect window{0, 0, 30, 30};
  ChainOptions chain;
  long n_replicas = 1;

  std::optional<std::string> sweep_parameter;  // z | theta1 | theta2 | theta3
  std::vector<double> sweep_values;

  Direction crossing_direction = Direction::horizontal;
  std::optional<double> diamond_ell;

  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::optional<std::string> snapshot_path;  // percolate input

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text, const std::string& origin);

  Boundary make_boundary() const;
  QuermassParams with_sweep_value(double v) const;
};

/// Runs the chain(s) and writes trace CSV + final snapshot JSON per replica.
void cmd_sample(const ExperimentConfig& config, int threads);

/// Sweep over z or a theta: per-(value, replica) rows in summary.csv,
/// mean/se aggregation per value in aggregate.csv.
void cmd_sweep(const ExperimentConfig& config, int threads);

/// K-type run reporting the dominance statistic D = max_k n_k / n computed
/// from time-averaged per-type counts, with per-replica rows and a report.
void cmd_multitype(const ExperimentConfig& config, int threads);

/// Connectivity analysis of a snapshot (or freshly sampled states):
/// components, crossing, and the site field when a diamond scale is set.
void cmd_percolate(const ExperimentConfig& config, int threads);

/// Property corpus; returns the report (caller decides the exit code).
validate::Report cmd_validate(const validate::Options& options, const std::string& out_dir);

/// Sidecar metadata (the only artifact carrying a timestamp).
void write_run_metadata(const std::string& out_dir, const std::string& command,
                        std::uint64_t seed);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace quermass::experiments
