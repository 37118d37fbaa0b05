#include "gnnlab/graph.hpp"

#include <algorithm>
#include <cmath>

#include "gnnlab/error.hpp"

namespace gnnlab {

Graph::Graph(NodeId n, int feature_dim, int num_classes,
             std::vector<double> features, std::vector<int> labels,
             const std::vector<std::pair<NodeId, NodeId>>& edges,
             std::vector<std::uint8_t> train_mask,
             std::vector<std::uint8_t> test_mask)
    : n_(n),
      r_(feature_dim),
      k_(num_classes),
      features_(std::move(features)),
      labels_(std::move(labels)),
      train_mask_(std::move(train_mask)),
      test_mask_(std::move(test_mask)) {
  if (n_ < 1) throw InputError("graph must have at least one node");
  if (r_ < 1) throw InputError("feature dimension must be at least 1");
  if (k_ < 1) throw InputError("class count must be at least 1");
  if (features_.size() != static_cast<std::size_t>(n_) * r_)
    throw InputError("feature matrix size does not match n x r");
  if (labels_.size() != static_cast<std::size_t>(n_))
    throw InputError("label vector length does not match n");
  if (train_mask_.size() != static_cast<std::size_t>(n_) ||
      test_mask_.size() != static_cast<std::size_t>(n_))
    throw InputError("mask length does not match n");

  for (NodeId i = 0; i < n_; ++i) {
    int y = labels_[static_cast<std::size_t>(i)];
    if (y < 0 || y >= k_)
      throw InputError("label " + std::to_string(y) + " of node " +
                       std::to_string(i) + " outside [0, " +
                       std::to_string(k_) + ")");
    if (train_mask_[static_cast<std::size_t>(i)] &&
        test_mask_[static_cast<std::size_t>(i)])
      throw InputError("node " + std::to_string(i) +
                       " is in both train and test masks");
    n_train_ += train_mask_[static_cast<std::size_t>(i)] ? 1 : 0;
    n_test_ += test_mask_[static_cast<std::size_t>(i)] ? 1 : 0;
  }
  if (n_train_ < 1) throw InputError("training set is empty");

  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
      throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("self-loop on node " + std::to_string(u) +
                                 " is not storable");
    ++offsets_[static_cast<std::size_t>(u) + 1];
    ++offsets_[static_cast<std::size_t>(v) + 1];
  }
  for (NodeId i = 0; i < n_; ++i)
    offsets_[static_cast<std::size_t>(i) + 1] += offsets_[static_cast<std::size_t>(i)];
  adj_.resize(static_cast<std::size_t>(offsets_[static_cast<std::size_t>(n_)]));
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges) {
    adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(u)]++)] = v;
    adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] = u;
  }
  for (NodeId i = 0; i < n_; ++i) {
    auto begin = adj_.begin() + offsets_[static_cast<std::size_t>(i)];
    auto end = adj_.begin() + offsets_[static_cast<std::size_t>(i) + 1];
    std::sort(begin, end);
    if (std::adjacent_find(begin, end) != end)
      throw InputError("duplicate edge at node " + std::to_string(i));
    d_max_ = std::max(d_max_, degree(i));
  }
}

std::vector<NodeId> Graph::train_nodes() const {
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(n_train_));
  for (NodeId i = 0; i < n_; ++i)
    if (train_mask_[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

std::vector<NodeId> Graph::test_nodes() const {
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(n_test_));
  for (NodeId i = 0; i < n_; ++i)
    if (test_mask_[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

Graph Graph::with_masks(std::vector<std::uint8_t> train_mask,
                        std::vector<std::uint8_t> test_mask) const {
  return Graph(n_, r_, k_, features_, labels_, edge_list(),
               std::move(train_mask), std::move(test_mask));
}

std::vector<std::pair<NodeId, NodeId>> Graph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(num_edges()));
  for (NodeId u = 0; u < n_; ++u)
    for (NodeId v : neighbors(u))
      if (u < v) edges.emplace_back(u, v);
  return edges;
}

DegreeInfo degree_info(const Graph& graph) {
  DegreeInfo info;
  NodeId n = graph.num_nodes();
  info.in_deg.resize(static_cast<std::size_t>(n));
  info.out_deg.resize(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    info.in_deg[static_cast<std::size_t>(i)] = graph.degree(i);
    info.out_deg[static_cast<std::size_t>(i)] = graph.degree(i);
  }
  info.d_max = graph.max_degree();
  return info;
}

int AdjRows::find_row(NodeId node) const {
  for (std::size_t i = 0; i < row_ids.size(); ++i)
    if (row_ids[i] == node) return static_cast<int>(i);
  return -1;
}

double row_squared_norm(const std::vector<AdjRows::Entry>& row, NodeId self,
                        bool include_self) {
  double sum = 0.0;
  for (const auto& e : row) {
    if (!include_self && e.col == self) continue;
    sum += e.value * e.value;
  }
  return sum;
}

std::vector<AdjRows::Entry> normalized_row(const Graph& graph, NodeId i,
                                           std::span<const NodeId> cols_sorted,
                                           NodeId effective_in_degree) {
  double di = 1.0 / std::sqrt(static_cast<double>(effective_in_degree) + 1.0);
  std::vector<AdjRows::Entry> row;
  row.reserve(cols_sorted.size() + 1);
  bool self_placed = false;
  for (NodeId j : cols_sorted) {
    if (!self_placed && j > i) {
      row.push_back({i, di / std::sqrt(static_cast<double>(graph.degree(i)) + 1.0)});
      self_placed = true;
    }
    row.push_back({j, di / std::sqrt(static_cast<double>(graph.degree(j)) + 1.0)});
  }
  if (!self_placed)
    row.push_back({i, di / std::sqrt(static_cast<double>(graph.degree(i)) + 1.0)});
  return row;
}

AdjRows normalized_rows_full(const Graph& graph,
                             std::span<const NodeId> node_set) {
  AdjRows out;
  out.provenance.kind = AdjRows::Provenance::Kind::full;
  out.width = graph.num_nodes();
  out.row_ids.assign(node_set.begin(), node_set.end());
  out.rows.reserve(node_set.size());
  for (NodeId i : node_set) {
    if (i < 0 || i >= graph.num_nodes())
      throw InputError("node id " + std::to_string(i) + " out of range");
    out.rows.push_back(normalized_row(graph, i, graph.neighbors(i), graph.degree(i)));
  }
  return out;
}

}  // namespace gnnlab
