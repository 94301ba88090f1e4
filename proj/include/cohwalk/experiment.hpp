#ifndef COHWALK_EXPERIMENT_HPP
#define COHWALK_EXPERIMENT_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cohwalk/types.hpp"

// Config-driven batch runner behind the cohwalk CLI. Sweep points are
// independent jobs executed by an OpenMP worker pool; result rows are stored
// by sweep index so the emitted table is deterministic for any worker count.
// Rows whose k-space quantities are undefined (near-critical angles) are
// omitted and logged to stderr.

namespace cohwalk {

enum class ExperimentKind {
  PhaseDiagram,
  MomentsSweep,
  CssSweep,
  Reconstruct,
  OracleCheck,
  CompileCheck,
};

ExperimentKind experiment_from_name(const std::string& name);  // throws ConfigError
std::string experiment_name(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::MomentsSweep;
  double theta1 = M_PI / 4.0;
  std::vector<double> theta2 = {M_PI / 8.0};
  int grid_count = 50;                 // phase-diagram grid per axis
  std::vector<int> steps = {20};
  std::vector<double> alphas = {0.8, 1.0, 1.2, 1.4, 1.6};
  std::vector<double> phis = {0.0, M_PI / 8.0, 3.0 * M_PI / 8.0};
  std::vector<std::string> coins = {"up"};  // up, down, chiral+, chiral-, or "re,im,re,im"
  int initial_position = 0;
  int shift = 2;                       // +-m for the shifted-pair column
  int degree = 4;                      // reconstruction fit degree
  int k_grid = 2048;
  bool k_offset = true;
  int fock_dim = 0;                    // 0 = auto (truncation rule)
  int workers = 0;                     // 0 = OpenMP default
  std::vector<int> sites = {-6, 6};    // compile-check site range
};

/// Parses a JSON config file. Unknown keys are a ConfigError.
ExperimentConfig load_config(const std::string& path);

/// CLI flag overrides (flags win over config keys).
struct ConfigOverrides {
  std::optional<std::string> experiment;
  std::optional<int> workers;
  std::optional<int> k_grid;
  std::optional<int> fock_dim;
};
void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides);

/// Schema and range checks only; never runs physics. Empty when valid.
std::vector<std::string> validate(const ExperimentConfig& config);

/// Resolved spin state for a coin label.
Spinor resolve_coin(const std::string& label, double theta1);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Runs the configured experiment. Throws ConfigError on validation failure
/// and propagates TruncationError from oracle runs.
ResultTable run(const ExperimentConfig& config);

/// CSV with a '#'-prefixed header block holding the resolved config, then the
/// column line and one row per line. Identical config -> identical bytes.
void write_csv(const ResultTable& table, const ExperimentConfig& config, const std::string& path);

}  // namespace cohwalk

#endif
