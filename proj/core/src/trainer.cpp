#include "gnnlab/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "gnnlab/error.hpp"

namespace gnnlab {

namespace {

constexpr double kDivergenceCeiling = 1e6;

double resolve_eta(const TrainConfig& config, const Graph& graph, int h) {
  if (!config.eta.theoretical) {
    if (!(config.eta.value > 0.0)) throw InputError("learning rate must be positive");
    return config.eta.value;
  }
  NodeId n_train = graph.num_train();
  if (config.mode == TrainMode::full) {
    if (config.loss == LossKind::mse)
      return theoretical_lr_mse_full(n_train, graph.max_degree(), config.c6).midpoint();
    return theoretical_lr_ce_full(graph.max_degree(), h, config.c4);
  }
  if (config.loss == LossKind::mse)
    return theoretical_lr_mse_mini(n_train, config.sampler.b, config.sampler.beta,
                                   config.c6)
        .midpoint();
  return theoretical_lr_ce_mini(n_train, config.sampler.b, config.sampler.beta, h,
                                config.c4);
}

double evaluate_loss(const AdjRows& rows, const Graph& graph,
                     const ModelParams& params, LossKind loss,
                     const std::vector<int>& labels,
                     const std::vector<int>& labels_pm1) {
  auto z = forward(rows, graph.features(), graph.feature_dim(), params);
  if (loss == LossKind::mse)
    return loss_mse(z, params.h, labels, graph.num_classes());
  return loss_ce(z, params.h, *params.v, labels_pm1);
}

double loss_from_aggregates(const std::vector<double>& agg, std::size_t rows,
                            const ModelParams& params, LossKind loss,
                            int num_classes, const std::vector<int>& labels,
                            const std::vector<int>& labels_pm1) {
  auto z = forward_aggregated(agg, rows, params);
  if (loss == LossKind::mse) return loss_mse(z, params.h, labels, num_classes);
  return loss_ce(z, params.h, *params.v, labels_pm1);
}

double accuracy_from_aggregates(const std::vector<double>& agg, std::size_t rows,
                                const ModelParams& params, LossKind loss,
                                const std::vector<int>& labels) {
  auto z = forward_aggregated(agg, rows, params);
  auto h = static_cast<std::size_t>(params.h);
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* zi = z.data() + i * h;
    if (loss == LossKind::mse) {
      int best = 0;
      for (int j = 1; j < params.h; ++j)
        if (zi[static_cast<std::size_t>(j)] > zi[static_cast<std::size_t>(best)])
          best = j;  // ties keep the lowest index
      if (best == labels[i]) ++correct;
    } else {
      const auto& v = *params.v;
      double yhat = 0.0;
      for (std::size_t j = 0; j < h; ++j) yhat += zi[j] * v[j];
      int pred = yhat > 0.0 ? 1 : -1;  // 0 counts as -1
      if (pred == (labels[i] == 1 ? 1 : -1)) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(rows);
}

std::string format_cell(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string Trajectory::to_csv() const {
  std::ostringstream out;
  out << "iter,batch_loss,full_loss,test_acc,elapsed_s,nodes_processed\n";
  std::size_t acc_idx = 0;
  for (std::size_t i = 0; i < batch_loss.size(); ++i) {
    auto iter = static_cast<std::int64_t>(i) + 1;
    out << iter << "," << format_cell(batch_loss[i]) << ","
        << format_cell(full_loss[i]) << ",";
    if (acc_idx < accuracy.size() && accuracy[acc_idx].iteration == iter) {
      out << format_cell(accuracy[acc_idx].value);
      ++acc_idx;
    }
    out << "," << format_cell(elapsed_s[i]) << "," << nodes_processed[i] << "\n";
  }
  return out.str();
}

Trajectory train(const Graph& graph, const ModelParams& init,
                 const TrainConfig& config) {
  if (config.max_iters < 1) throw InputError("max_iters must be at least 1");
  if (config.eval_every < 1) throw InputError("eval_every must be at least 1");
  if (config.loss == LossKind::ce) {
    if (graph.num_classes() != 2)
      throw InputError("CE training needs a binary dataset");
    if (!init.v) throw InputError("CE training needs the fixed readout vector");
  } else if (init.h != graph.num_classes()) {
    throw InputError("MSE training needs h equal to the class count");
  }
  if (config.mode == TrainMode::mini &&
      (config.sampler.b < 1 || config.sampler.b > graph.num_train()))
    throw InputError("batch size outside [1, n_train]");

  ModelParams params = init;
  double eta = resolve_eta(config, graph, params.h);

  // Aggregated features are independent of W; cache them for the training
  // rows and the test split instead of re-aggregating at every evaluation.
  auto train_ids = graph.train_nodes();
  AdjRows full_rows = normalized_rows_full(graph, train_ids);
  auto full_agg =
      aggregate_features(full_rows, graph.features(), graph.feature_dim());
  std::vector<int> full_labels(train_ids.size());
  for (std::size_t i = 0; i < train_ids.size(); ++i)
    full_labels[i] = graph.label(train_ids[i]);
  std::vector<int> full_labels_pm1;
  if (config.loss == LossKind::ce) full_labels_pm1 = to_pm1_labels(full_labels);

  auto test_ids = graph.test_nodes();
  std::vector<double> test_agg;
  std::vector<int> test_labels;
  if (!test_ids.empty()) {
    AdjRows test_rows = normalized_rows_full(graph, test_ids);
    test_agg =
        aggregate_features(test_rows, graph.features(), graph.feature_dim());
    for (NodeId t : test_ids) test_labels.push_back(graph.label(t));
  }

  Trajectory traj;
  traj.mode = config.mode;
  traj.eta_used = eta;
  traj.b = config.mode == TrainMode::mini ? config.sampler.b : graph.num_train();
  traj.beta = config.mode == TrainMode::mini ? config.sampler.beta
                                             : graph.max_degree();

  std::int64_t nodes_total = 0;
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  for (std::int64_t iter = 1; iter <= config.max_iters; ++iter) {
    bool eval_point = iter % config.eval_every == 0 || iter == config.max_iters;
    double batch_loss;  // loss at the point the step was computed from

    if (config.mode == TrainMode::full) {
      batch_loss =
          loss_from_aggregates(full_agg, train_ids.size(), params, config.loss,
                               graph.num_classes(), full_labels, full_labels_pm1);
      auto grad = config.loss == LossKind::mse
                      ? grad_mse(full_rows, graph.features(), graph.feature_dim(),
                                 params, full_labels)
                      : grad_ce(full_rows, graph.features(), graph.feature_dim(),
                                params, full_labels_pm1);
      for (std::size_t i = 0; i < params.weights.size(); ++i)
        params.weights[i] -= eta * grad[i];
      nodes_total += graph.num_train();
    } else {
      auto targets = sample_batch(graph, config.sampler, iter);
      // Canonical ascending order keeps the gradient accumulation identical
      // to full-graph traversal when b = n_train.
      std::sort(targets.begin(), targets.end());
      auto batch = sample_neighbors(graph, targets, config.sampler.beta,
                                    config.sampler.seed, iter,
                                    config.sampler.normalization);
      std::vector<int> labels(targets.size());
      for (std::size_t i = 0; i < targets.size(); ++i)
        labels[i] = graph.label(targets[i]);
      std::vector<int> labels_pm1;
      if (config.loss == LossKind::ce) labels_pm1 = to_pm1_labels(labels);

      batch_loss = evaluate_loss(batch.adj, graph, params, config.loss, labels,
                                 labels_pm1);
      auto grad = config.loss == LossKind::mse
                      ? grad_mse(batch.adj, graph.features(), graph.feature_dim(),
                                 params, labels)
                      : grad_ce(batch.adj, graph.features(), graph.feature_dim(),
                                params, labels_pm1);
      for (std::size_t i = 0; i < params.weights.size(); ++i)
        params.weights[i] -= eta * grad[i];
      nodes_total += config.sampler.b;
    }

    // Full-graph loss after the step: every iteration in full mode, at eval
    // points in mini mode (the batch loss is too noisy to cross targets on).
    double full_loss = std::numeric_limits<double>::quiet_NaN();
    if (config.mode == TrainMode::full || eval_point)
      full_loss =
          loss_from_aggregates(full_agg, train_ids.size(), params, config.loss,
                               graph.num_classes(), full_labels, full_labels_pm1);

    for (double guard : {batch_loss, full_loss})
      if (!std::isnan(guard) &&
          (!std::isfinite(guard) || guard > kDivergenceCeiling))
        throw DivergedError("training diverged, loss " + std::to_string(guard),
                            iter);

    traj.batch_loss.push_back(batch_loss);
    traj.full_loss.push_back(full_loss);
    traj.nodes_processed.push_back(nodes_total);
    if (eval_point && !test_ids.empty())
      traj.accuracy.push_back(
          {iter, accuracy_from_aggregates(test_agg, test_ids.size(), params,
                                          config.loss, test_labels)});
    traj.elapsed_s.push_back(elapsed());

    if (config.target_loss && !std::isnan(full_loss) &&
        full_loss <= *config.target_loss)
      break;
  }

  traj.final_params = std::move(params);
  return traj;
}

LearningRateInterval theoretical_lr_mse_mini(NodeId n_train, NodeId b, NodeId beta,
                                             double c6) {
  if (n_train < 1 || b < 1 || beta < 1)
    throw InputError("learning-rate interval needs positive sizes");
  if (c6 < 0.0) throw InputError("C6 must be non-negative");
  double nb = static_cast<double>(n_train);
  double bb = static_cast<double>(b);
  double bt = static_cast<double>(beta);
  LearningRateInterval out;
  out.lo = c6 * bt * bt * bt / (std::numbers::pi * nb * bb * bb);
  out.hi = bb / (6.0 * std::numbers::pi * bt * nb);
  if (out.lo > out.hi)
    throw InputError("infeasible learning-rate interval: fan-out " +
                     std::to_string(beta) + " too large for batch size " +
                     std::to_string(b));
  return out;
}

LearningRateInterval theoretical_lr_mse_full(NodeId n_train, NodeId d_max,
                                             double c6) {
  if (n_train < 1 || d_max < 1)
    throw InputError("learning-rate interval needs positive sizes");
  if (c6 < 0.0) throw InputError("C6 must be non-negative");
  double nb = static_cast<double>(n_train);
  double dd = static_cast<double>(d_max);
  LearningRateInterval out;
  out.lo = c6 * dd * dd * dd / (std::numbers::pi * nb * nb * nb);
  out.hi = 1.0 / (6.0 * std::numbers::pi * dd);
  if (out.lo > out.hi)
    throw InputError("infeasible learning-rate interval: d_max too large");
  return out;
}

double theoretical_lr_ce_mini(NodeId n_train, NodeId b, NodeId beta, int h,
                              double c4) {
  if (n_train < 1 || b < 1 || beta < 1 || h < 1 || !(c4 > 0.0))
    throw InputError("CE step size needs positive inputs");
  return static_cast<double>(b) /
         (4.0 * c4 * static_cast<double>(beta) * static_cast<double>(h) *
          static_cast<double>(n_train));
}

double theoretical_lr_ce_full(NodeId d_max, int h, double c4) {
  if (d_max < 1 || h < 1 || !(c4 > 0.0))
    throw InputError("CE step size needs positive inputs");
  return 1.0 / (4.0 * c4 * static_cast<double>(d_max) * static_cast<double>(h));
}

std::int64_t min_hidden_dim_ce(NodeId n_train, NodeId beta, double epsilon,
                               double c) {
  if (n_train < 1 || beta < 1) throw InputError("sizes must be positive");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  double nb = static_cast<double>(n_train);
  double bound = c * std::log(nb) * (nb * nb + 1.0 / epsilon) /
                 static_cast<double>(beta);
  return static_cast<std::int64_t>(std::ceil(bound));
}

double accuracy(const Graph& graph, const ModelParams& params, LossKind loss,
                EvalSplit split) {
  auto ids = split == EvalSplit::test ? graph.test_nodes() : graph.train_nodes();
  if (ids.empty()) throw InputError("accuracy over an empty split");
  AdjRows rows = normalized_rows_full(graph, ids);
  auto z = forward(rows, graph.features(), graph.feature_dim(), params);
  auto h = static_cast<std::size_t>(params.h);
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double* zi = z.data() + i * h;
    if (loss == LossKind::mse) {
      int best = 0;
      for (int j = 1; j < params.h; ++j)
        if (zi[static_cast<std::size_t>(j)] > zi[static_cast<std::size_t>(best)])
          best = j;  // ties keep the lowest index
      if (best == graph.label(ids[i])) ++correct;
    } else {
      const auto& v = *params.v;
      double yhat = 0.0;
      for (std::size_t j = 0; j < h; ++j) yhat += zi[j] * v[j];
      int pred = yhat > 0.0 ? 1 : -1;  // 0 counts as -1
      int truth = graph.label(ids[i]) == 1 ? 1 : -1;
      if (pred == truth) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(ids.size());
}

}  // namespace gnnlab
