#pragma once

#include <cstdint>
#include <vector>

#include "gnnlab/graph.hpp"

namespace gnnlab {

/// How mini-batch rows are normalized on the row (in-degree) side. The
/// column side always uses full-graph degrees, which is what makes
/// b = n_train, beta = d_max reduce to full-graph rows bit-exactly.
enum class MiniNormalization {
  sampled_in_degree,  // row scaled by 1/sqrt(|sampled neighbors| + 1)
  full_degree,        // row keeps 1/sqrt(deg + 1); sampling only drops columns
};

struct SamplerConfig {
  NodeId b = 1;          // batch size, 1 <= b <= n_train
  NodeId beta = 1;       // fan-out size, >= 1
  std::uint64_t seed = 0;
  bool nested = false;   // smaller batches are prefixes of larger ones
  MiniNormalization normalization = MiniNormalization::sampled_in_degree;
};

struct MiniBatch {
  std::vector<NodeId> target_nodes;
  AdjRows adj;
  std::vector<std::vector<NodeId>> sampled_neighbors;  // per target, sorted
};

/// b distinct training nodes, uniform without replacement, deterministic in
/// (seed, iteration). The returned order is the draw order: with the same
/// (seed, iteration), the batch of size b is a prefix of any larger batch.
std::vector<NodeId> sample_batch(const Graph& graph, const SamplerConfig& config,
                                 std::int64_t iteration);

/// Per target, min(deg, beta) neighbors uniform without replacement. The
/// per-node draw is keyed by (seed, iteration, node id), so a node's sample
/// does not depend on which other targets are in the batch.
MiniBatch sample_neighbors(const Graph& graph, const std::vector<NodeId>& targets,
                           NodeId beta, std::uint64_t seed, std::int64_t iteration,
                           MiniNormalization normalization =
                               MiniNormalization::sampled_in_degree);

/// One sampled row per training node at fan-out beta, keyed by (seed, node)
/// only. Supplies a~^mini for every training node, as the distance cost sums
/// over the whole training set. `draw` separates independent realizations.
AdjRows virtual_rows_all_train(const Graph& graph, NodeId beta,
                               std::uint64_t seed, std::uint64_t draw = 0,
                               MiniNormalization normalization =
                                   MiniNormalization::sampled_in_degree);

}  // namespace gnnlab
