#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnnlab/model.hpp"
#include "gnnlab/sampling.hpp"

namespace gnnlab {

enum class TrainMode { full, mini };

/// Learning rate: either an explicit positive value or the closed-form
/// theoretical setting for the active loss and mode.
struct LearningRate {
  bool theoretical = false;
  double value = 0.0;

  static LearningRate fixed(double eta) { return {false, eta}; }
  static LearningRate from_theory() { return {true, 0.0}; }
};

struct TrainConfig {
  LossKind loss = LossKind::mse;
  TrainMode mode = TrainMode::full;
  SamplerConfig sampler;            // used in mini mode
  LearningRate eta;
  std::int64_t max_iters = 1000;
  std::optional<double> target_loss;  // stop once full-graph loss <= target
  std::int64_t eval_every = 10;       // accuracy (and mini full-loss) period
  double c4 = 1.0;                    // CE step-size constant
  double c6 = 0.1;                    // MSE interval constant, must be < 1/6
};

struct AccuracySample {
  std::int64_t iteration;  // 1-based
  double value;
};

struct Trajectory {
  // Per iteration, 1-based; batch_loss equals full_loss in full mode.
  std::vector<double> batch_loss;
  std::vector<double> full_loss;  // NaN where not evaluated
  std::vector<AccuracySample> accuracy;
  std::vector<double> elapsed_s;              // cumulative wall clock
  std::vector<std::int64_t> nodes_processed;  // cumulative targets
  ModelParams final_params;
  double eta_used = 0.0;
  TrainMode mode = TrainMode::full;
  NodeId b = 0;
  NodeId beta = 0;

  std::int64_t iterations() const { return static_cast<std::int64_t>(batch_loss.size()); }

  /// CSV: iter, batch_loss, full_loss, test_acc, elapsed_s, nodes_processed
  /// with empty cells where a value was not sampled.
  std::string to_csv() const;
};

Trajectory train(const Graph& graph, const ModelParams& init,
                 const TrainConfig& config);

struct LearningRateInterval {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Mini-batch MSE interval [C6 b^3 fan-out terms ...]; throws InputError when
/// the interval is empty (equivalently when beta exceeds (1/(6 C6))^(1/4) b^(3/4)).
LearningRateInterval theoretical_lr_mse_mini(NodeId n_train, NodeId b, NodeId beta,
                                             double c6);

/// Full-graph MSE analogue with beta -> d_max, b -> n_train.
LearningRateInterval theoretical_lr_mse_full(NodeId n_train, NodeId d_max,
                                             double c6);

/// Mini-batch CE step size b / (4 C4 beta h n_train).
double theoretical_lr_ce_mini(NodeId n_train, NodeId b, NodeId beta, int h,
                              double c4);

/// Full-graph CE step size 1 / (4 C4 d_max h).
double theoretical_lr_ce_full(NodeId d_max, int h, double c4);

/// ceil(c * log(n_train) * (n_train^2 + 1/epsilon) / beta).
std::int64_t min_hidden_dim_ce(NodeId n_train, NodeId beta, double epsilon,
                               double c = 1.0);

enum class EvalSplit { train, test };

/// Classification accuracy under full-graph inference rows. MSE decodes by
/// argmax (ties to the lowest index); CE decodes by sign of z v^T with 0
/// counting as -1.
double accuracy(const Graph& graph, const ModelParams& params, LossKind loss,
                EvalSplit split);

}  // namespace gnnlab
