#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnnlab/trainer.hpp"

namespace gnnlab {

/// Convergence target. Derived targets come from the variance-window rule
/// over a reference trajectory; see derive_target_loss / derive_target_accuracy.
struct TargetSpec {
  enum class Kind { loss, accuracy };
  Kind kind = Kind::loss;
  double value = 0.0;
  bool derived = false;
  int window = 0;               // set when derived
  double var_threshold = 0.0;   // set when derived
};

struct MetricReport {
  std::optional<std::int64_t> iteration_to_loss;
  std::optional<std::int64_t> iteration_to_accuracy;
  std::optional<double> time_to_accuracy_s;
  double throughput = 0.0;  // target nodes per second
};

inline constexpr int kTargetWindow = 100;
inline constexpr double kLossVarThreshold = 5e-4;
inline constexpr double kAccuracyVarThreshold = 4e-4;

/// Population variance (divide by the window length). The derivation rules
/// below are pinned to this convention.
double population_variance(const double* values, int count);

/// Max loss over the first window of 100 consecutive full-loss samples whose
/// population variance is strictly below 5e-4. Throws InputError when no
/// window qualifies or fewer than 100 samples exist.
TargetSpec derive_target_loss(const Trajectory& reference);

/// Min accuracy over the first window of 100 consecutive accuracy samples
/// whose population variance is strictly below 4e-4.
TargetSpec derive_target_accuracy(const Trajectory& reference);

/// Smallest 1-based iteration where the trajectory crosses the target:
/// full loss <= value for loss targets, accuracy >= value for accuracy
/// targets. Crossings are only detected at sampled iterations.
std::optional<std::int64_t> iteration_to(const Trajectory& trajectory,
                                         const TargetSpec& target);

/// Elapsed seconds at the crossing iteration.
std::optional<double> time_to(const Trajectory& trajectory,
                              const TargetSpec& target);

/// Total target nodes processed per second over the whole run.
double throughput(const Trajectory& trajectory);

MetricReport compute_metrics(const Trajectory& trajectory,
                             const std::optional<TargetSpec>& loss_target,
                             const std::optional<TargetSpec>& accuracy_target);

}  // namespace gnnlab
