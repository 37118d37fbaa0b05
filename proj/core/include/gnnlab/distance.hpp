#pragma once

#include <cstdint>
#include <vector>

#include "gnnlab/sampling.hpp"
#include "gnnlab/transport.hpp"

namespace gnnlab {

/// Composite structural cost delta(y_i, y_j, beta, b) between every
/// (training node, test node) pair:
///   entry = (C_delta h^2 / n_min) * (delta_full[i][j] + delta_full_mini[i]).
struct CostMatrix {
  std::vector<NodeId> train_ids;
  std::vector<NodeId> test_ids;
  std::vector<double> entries;          // n_train x n_test, row-major
  std::vector<double> delta_full;       // n_train x n_test component
  std::vector<double> delta_full_mini;  // per training node component
  double c_delta = 1.0;
  int h = 1;
  NodeId n_min = 0;
  double scale = 0.0;  // C_delta h^2 / n_min

  double at(std::size_t i, std::size_t j) const {
    return entries[i * test_ids.size() + j];
  }
};

/// Per-node probability masses over the two splits. Each node carries its
/// label's split frequency divided by the number of same-label nodes in the
/// split, which reduces to 1/n_split; each side sums to one.
struct Marginals {
  std::vector<double> rho_train;  // aligned with ascending train ids
  std::vector<double> rho_test;
};

/// Optimal coupling realizing the Wasserstein distance.
struct TransportPlan {
  struct Entry {
    std::size_t i;  // index into train ids
    std::size_t j;  // index into test ids
    double mass;
  };
  std::vector<Entry> plan;
  double cost = 0.0;
  std::vector<double> row_marginals;
  std::vector<double> col_marginals;

  /// Max-norm residual of the coupling's marginal constraints.
  double max_marginal_residual() const;
};

/// ||a~_test_j - a~_train_i||^2 + 2 ||a~_test_j||^2 for every pair.
std::vector<double> delta_full(const AdjRows& full_train_rows,
                               const AdjRows& full_test_rows);

/// ||a~_full_train_i - a~_mini_train_i||^2 per training node. `mini_rows`
/// must carry one row per training node (virtual_rows_all_train).
std::vector<double> delta_full_mini(const AdjRows& full_train_rows,
                                    const AdjRows& mini_rows);

struct CostOptions {
  double c_delta = 1.0;
  int h = 1;
  int draws = 1;  // delta_full_mini averages this many virtual realizations
  MiniNormalization normalization = MiniNormalization::sampled_in_degree;
};

/// Composes the full and full-mini components at batch size b under nested
/// coupling: the batch B(b) is the prefix of a seed-keyed permutation of the
/// training set, nodes in B(b) contribute their virtual sampled row, nodes
/// outside contribute the zero row (their full row goes unmatched). Holding
/// the per-node samples fixed, growing b can only shrink the cost, provided
/// node degrees stay within 4*beta + 3.
CostMatrix build_cost(const Graph& graph, NodeId beta, NodeId b,
                      std::uint64_t seed, const CostOptions& options = {});

Marginals marginals(const Graph& graph);

/// Exact optimal transport via the transportation network simplex.
TransportPlan wasserstein(const CostMatrix& cost, const Marginals& marginals);

/// PAC-Bayes test-risk bound
///   L_train + (1/C_u)(D_KL + ln(1/C_G) + C_u^2/(4 n_train) + C_u Delta)
/// with D_KL replaced by its bound ||W||_F^2 / (2 h kappa^2).
double generalization_bound(double train_loss, const std::vector<double>& weights,
                            double kappa, int h, NodeId n_train, double delta,
                            double c_u, double c_g);

}  // namespace gnnlab
