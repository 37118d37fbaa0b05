#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gnnlab/graph.hpp"

namespace gnnlab {

enum class LossKind { mse, ce };

/// One-layer GNN parameters: z_i = scale * relu(a~_i X W^T), and for the
/// binary CE head y^_i = z_i v^T with a fixed +-1 readout vector v.
struct ModelParams {
  int h = 1;                       // hidden dimension (= K for MSE)
  int r = 1;                       // feature dimension
  std::vector<double> weights;     // h x r, row-major
  double kappa = 0.1;              // init standard deviation
  std::optional<std::vector<double>> v;  // +-1 entries, h/2 of each
  double activation_scale = 1.0;   // 1 or sqrt(2)

  double& w(int unit, int feat) { return weights[static_cast<std::size_t>(unit) * r + feat]; }
  double w(int unit, int feat) const { return weights[static_cast<std::size_t>(unit) * r + feat]; }
};

/// Gaussian N(0, kappa^2) init, deterministic in seed.
ModelParams init_gaussian(int h, int r, double kappa, std::uint64_t seed);

/// Fixed readout vector with the first h/2 entries +1 and the rest -1.
std::vector<double> balanced_sign_vector(int h);

/// Aggregated features a~_i X for every row, |rows| x r.
std::vector<double> aggregate_features(const AdjRows& rows,
                                       const std::vector<double>& features,
                                       int feature_dim);

/// Forward pass, |rows| x h. Values: scale * max(0, a~_i X w_j^T).
std::vector<double> forward(const AdjRows& rows, const std::vector<double>& features,
                            int feature_dim, const ModelParams& params);

/// Forward pass from precomputed aggregates (aggregates are W-independent,
/// so training loops cache them).
std::vector<double> forward_aggregated(const std::vector<double>& aggregates,
                                       std::size_t row_count,
                                       const ModelParams& params);

/// Mean over rows of (1/2)||z_i - onehot(y_i)||^2. Requires h = K.
double loss_mse(const std::vector<double>& z, int h,
                const std::vector<int>& labels, int num_classes);

/// Mean over rows of log(1 + exp(-y_i * z_i v^T)), labels in {-1, +1};
/// evaluated in softplus form so large margins stay finite.
double loss_ce(const std::vector<double>& z, int h, const std::vector<double>& v,
               const std::vector<int>& labels_pm1);

/// Gradients of the above losses composed with the forward pass, h x r.
/// ReLU subgradient at 0 is 0 (strict > indicator).
std::vector<double> grad_mse(const AdjRows& rows, const std::vector<double>& features,
                             int feature_dim, const ModelParams& params,
                             const std::vector<int>& labels);
std::vector<double> grad_ce(const AdjRows& rows, const std::vector<double>& features,
                            int feature_dim, const ModelParams& params,
                            const std::vector<int>& labels_pm1);

/// Dataset labels {0, 1} remapped to {-1, +1}; rejects other values.
std::vector<int> to_pm1_labels(const std::vector<int>& labels);

}  // namespace gnnlab
