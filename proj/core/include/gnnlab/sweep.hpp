#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnnlab/config.hpp"
#include "gnnlab/metrics.hpp"
#include "gnnlab/simulator.hpp"
#include "gnnlab/trainer.hpp"

namespace gnnlab {

/// Resolved sweep: a grid over (b, beta, eta, seed) of mini-batch training
/// runs on one dataset, with metric targets either explicit or derived from
/// the reference run (smallest b, ties to smallest beta, then first eta/seed
/// in grid order).
struct SweepSpec {
  std::string graph_path;
  std::string graph_sha256;  // filled on resolve

  LossKind loss = LossKind::mse;
  int h = 2;
  double kappa = 0.1;
  double activation_scale = 1.0;

  std::int64_t max_iters = 1000;
  std::int64_t eval_every = 10;
  double c4 = 1.0;
  double c6 = 0.1;

  std::vector<NodeId> b_values;
  std::vector<NodeId> beta_values;
  bool eta_theoretical = false;
  std::vector<double> eta_values;  // ignored when eta_theoretical
  std::vector<std::uint64_t> seeds;

  std::optional<double> explicit_target_loss;   // nullopt -> derive
  std::optional<double> explicit_target_accuracy;
  bool want_accuracy_target = true;

  // Deterministic clock for time metrics: per-iteration time from the
  // closed-form cost model instead of the wall clock, so replays are
  // byte-identical regardless of host load or --jobs.
  HardwareProfile clock_profile{1e6, 1e6};
};

struct RunPoint {
  int run_id = 0;
  NodeId b = 0;
  NodeId beta = 0;
  bool eta_theoretical = false;
  double eta = 0.0;  // resolved value for reporting
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::vector<RunPoint> runs;
  std::string metrics_csv;
  std::string manifest_text;
  std::optional<TargetSpec> loss_target;
  std::optional<TargetSpec> accuracy_target;
  std::vector<std::string> warnings;
};

/// Grid order: b, then beta, then eta, then seed (row-major).
std::vector<RunPoint> enumerate_runs(const SweepSpec& spec);

/// Runs the sweep with up to `jobs` concurrent runs; per-run trajectory CSVs
/// (model-clock elapsed) are returned alongside the metrics CSV. Outputs are
/// byte-identical for any positive `jobs`.
SweepResult run_sweep(const SweepSpec& spec, int jobs,
                      std::vector<std::string>* trajectory_csvs = nullptr);

/// Spec <-> config-file round trip. `parse_sweep_spec` validates keys and
/// applies `GNNLAB_SEED` when `env_seed` is set.
SweepSpec parse_sweep_spec(const Config& config,
                           const std::optional<std::uint64_t>& env_seed);
Config manifest_config(const SweepSpec& spec);
SweepSpec spec_from_manifest(const Config& manifest,
                             const std::optional<std::uint64_t>& env_seed);

}  // namespace gnnlab
