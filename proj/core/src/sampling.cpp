#include "gnnlab/sampling.hpp"

#include <algorithm>

#include "gnnlab/error.hpp"
#include "gnnlab/rng.hpp"

namespace gnnlab {

namespace {

std::vector<NodeId> sample_node_neighbors(const Graph& graph, NodeId node,
                                          NodeId beta, std::uint64_t seed,
                                          RngDomain domain,
                                          std::uint64_t stream_tag) {
  auto nbrs = graph.neighbors(node);
  std::vector<NodeId> chosen;
  if (static_cast<NodeId>(nbrs.size()) <= beta) {
    chosen.assign(nbrs.begin(), nbrs.end());
  } else {
    RngStream rng(seed, domain, stream_tag, static_cast<std::uint64_t>(node));
    chosen = rng.sample_prefix(std::vector<NodeId>(nbrs.begin(), nbrs.end()),
                               static_cast<std::size_t>(beta));
    std::sort(chosen.begin(), chosen.end());
  }
  return chosen;
}

AdjRows rows_for_targets(const Graph& graph, const std::vector<NodeId>& targets,
                         NodeId beta, std::uint64_t seed, std::uint64_t stream_tag,
                         MiniNormalization normalization,
                         std::vector<std::vector<NodeId>>* sampled_out) {
  AdjRows rows;
  rows.provenance.kind = AdjRows::Provenance::Kind::mini;
  rows.provenance.b = static_cast<NodeId>(targets.size());
  rows.provenance.beta = beta;
  rows.provenance.seed = seed;
  rows.width = graph.num_nodes();
  rows.row_ids = targets;
  rows.rows.reserve(targets.size());
  for (NodeId t : targets) {
    auto chosen = sample_node_neighbors(graph, t, beta, seed,
                                        RngDomain::neighbors, stream_tag);
    NodeId eff_in = normalization == MiniNormalization::sampled_in_degree
                        ? static_cast<NodeId>(chosen.size())
                        : graph.degree(t);
    rows.rows.push_back(normalized_row(graph, t, chosen, eff_in));
    if (sampled_out) sampled_out->push_back(std::move(chosen));
  }
  return rows;
}

}  // namespace

std::vector<NodeId> sample_batch(const Graph& graph, const SamplerConfig& config,
                                 std::int64_t iteration) {
  if (config.b < 1 || config.b > graph.num_train())
    throw InputError("batch size " + std::to_string(config.b) +
                     " outside [1, n_train = " +
                     std::to_string(graph.num_train()) + "]");
  if (config.beta < 1) throw InputError("fan-out size must be at least 1");

  // Nested mode shares one permutation stream across batch sizes, so the
  // size-b batch is a prefix of any larger batch at the same (seed,
  // iteration). Otherwise b joins the key and draws are independent.
  RngStream rng(config.seed, RngDomain::batch,
                static_cast<std::uint64_t>(iteration),
                config.nested ? 0 : static_cast<std::uint64_t>(config.b));
  return rng.sample_prefix(graph.train_nodes(),
                           static_cast<std::size_t>(config.b));
}

MiniBatch sample_neighbors(const Graph& graph, const std::vector<NodeId>& targets,
                           NodeId beta, std::uint64_t seed, std::int64_t iteration,
                           MiniNormalization normalization) {
  if (targets.empty()) throw InputError("target set is empty");
  if (beta < 1) throw InputError("fan-out size must be at least 1");
  for (NodeId t : targets) {
    if (t < 0 || t >= graph.num_nodes())
      throw InputError("target id " + std::to_string(t) + " out of range");
    if (!graph.is_train(t))
      throw InputError("target id " + std::to_string(t) +
                       " is not a training node");
  }

  MiniBatch batch;
  batch.target_nodes = targets;
  batch.adj = rows_for_targets(graph, targets, beta, seed,
                               static_cast<std::uint64_t>(iteration),
                               normalization, &batch.sampled_neighbors);
  return batch;
}

AdjRows virtual_rows_all_train(const Graph& graph, NodeId beta,
                               std::uint64_t seed, std::uint64_t draw,
                               MiniNormalization normalization) {
  if (beta < 1) throw InputError("fan-out size must be at least 1");
  auto train = graph.train_nodes();
  // Keyed by (seed, draw, node) only, so a node's virtual row is stable
  // across batch sizes; `draw` separates independent realizations.
  AdjRows out;
  out.provenance.kind = AdjRows::Provenance::Kind::mini;
  out.provenance.b = graph.num_train();
  out.provenance.beta = beta;
  out.provenance.seed = seed;
  out.width = graph.num_nodes();
  out.row_ids = train;
  out.rows.reserve(train.size());
  for (NodeId t : train) {
    auto chosen = sample_node_neighbors(graph, t, beta, seed,
                                        RngDomain::virtual_rows, draw);
    NodeId eff_in = normalization == MiniNormalization::sampled_in_degree
                        ? static_cast<NodeId>(chosen.size())
                        : graph.degree(t);
    out.rows.push_back(normalized_row(graph, t, chosen, eff_in));
  }
  return out;
}

}  // namespace gnnlab
