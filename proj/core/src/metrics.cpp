#include "gnnlab/metrics.hpp"

#include <cmath>

#include "gnnlab/error.hpp"

namespace gnnlab {

double population_variance(const double* values, int count) {
  double mean = 0.0;
  for (int i = 0; i < count; ++i) mean += values[i];
  mean /= count;
  double var = 0.0;
  for (int i = 0; i < count; ++i) {
    double d = values[i] - mean;
    var += d * d;
  }
  return var / count;
}

namespace {

// Sampled (iteration, value) sequence a trajectory exposes for a target kind.
std::vector<std::pair<std::int64_t, double>> samples_for(
    const Trajectory& traj, TargetSpec::Kind kind) {
  std::vector<std::pair<std::int64_t, double>> out;
  if (kind == TargetSpec::Kind::loss) {
    for (std::size_t i = 0; i < traj.full_loss.size(); ++i)
      if (!std::isnan(traj.full_loss[i]))
        out.emplace_back(static_cast<std::int64_t>(i) + 1, traj.full_loss[i]);
  } else {
    for (const auto& s : traj.accuracy) out.emplace_back(s.iteration, s.value);
  }
  return out;
}

TargetSpec derive_target(const Trajectory& reference, TargetSpec::Kind kind,
                         double var_threshold) {
  auto samples = samples_for(reference, kind);
  if (samples.size() < static_cast<std::size_t>(kTargetWindow))
    throw InputError("target derivation needs at least " +
                     std::to_string(kTargetWindow) + " samples, got " +
                     std::to_string(samples.size()));
  std::vector<double> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) values[i] = samples[i].second;

  for (std::size_t start = 0; start + kTargetWindow <= values.size(); ++start) {
    if (population_variance(values.data() + start, kTargetWindow) <
        var_threshold) {
      double extreme = values[start];
      for (int i = 1; i < kTargetWindow; ++i) {
        double v = values[start + static_cast<std::size_t>(i)];
        extreme = kind == TargetSpec::Kind::loss ? std::max(extreme, v)
                                                 : std::min(extreme, v);
      }
      TargetSpec spec;
      spec.kind = kind;
      spec.value = extreme;
      spec.derived = true;
      spec.window = kTargetWindow;
      spec.var_threshold = var_threshold;
      return spec;
    }
  }
  throw InputError("no window of " + std::to_string(kTargetWindow) +
                   " samples has variance below threshold; target not derivable");
}

}  // namespace

TargetSpec derive_target_loss(const Trajectory& reference) {
  return derive_target(reference, TargetSpec::Kind::loss, kLossVarThreshold);
}

TargetSpec derive_target_accuracy(const Trajectory& reference) {
  return derive_target(reference, TargetSpec::Kind::accuracy,
                       kAccuracyVarThreshold);
}

std::optional<std::int64_t> iteration_to(const Trajectory& trajectory,
                                         const TargetSpec& target) {
  for (auto [iter, value] : samples_for(trajectory, target.kind)) {
    bool crossed = target.kind == TargetSpec::Kind::loss
                       ? value <= target.value
                       : value >= target.value;
    if (crossed) return iter;
  }
  return std::nullopt;
}

std::optional<double> time_to(const Trajectory& trajectory,
                              const TargetSpec& target) {
  auto iter = iteration_to(trajectory, target);
  if (!iter) return std::nullopt;
  return trajectory.elapsed_s[static_cast<std::size_t>(*iter - 1)];
}

double throughput(const Trajectory& trajectory) {
  if (trajectory.nodes_processed.empty())
    throw InputError("throughput of an empty trajectory");
  double total_s = trajectory.elapsed_s.back();
  if (!(total_s > 0.0)) throw InputError("throughput needs positive elapsed time");
  return static_cast<double>(trajectory.nodes_processed.back()) / total_s;
}

MetricReport compute_metrics(const Trajectory& trajectory,
                             const std::optional<TargetSpec>& loss_target,
                             const std::optional<TargetSpec>& accuracy_target) {
  MetricReport report;
  if (loss_target) report.iteration_to_loss = iteration_to(trajectory, *loss_target);
  if (accuracy_target) {
    report.iteration_to_accuracy = iteration_to(trajectory, *accuracy_target);
    report.time_to_accuracy_s = time_to(trajectory, *accuracy_target);
  }
  report.throughput = throughput(trajectory);
  return report;
}

}  // namespace gnnlab
