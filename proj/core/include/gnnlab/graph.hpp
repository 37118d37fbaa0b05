#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gnnlab {

using NodeId = std::int32_t;

/// Immutable undirected graph with dense node features, integer labels and
/// disjoint train/test masks. Adjacency is CSR with both directions of each
/// undirected edge stored; self-loops are never stored (normalization adds
/// them), duplicate edges are rejected.
class Graph {
public:
  Graph(NodeId n, int feature_dim, int num_classes,
        std::vector<double> features, std::vector<int> labels,
        const std::vector<std::pair<NodeId, NodeId>>& edges,
        std::vector<std::uint8_t> train_mask,
        std::vector<std::uint8_t> test_mask);

  NodeId num_nodes() const noexcept { return n_; }
  int feature_dim() const noexcept { return r_; }
  int num_classes() const noexcept { return k_; }
  std::int64_t num_edges() const noexcept {
    return static_cast<std::int64_t>(adj_.size()) / 2;
  }

  std::span<const double> feature_row(NodeId i) const {
    return {features_.data() + static_cast<std::size_t>(i) * r_,
            static_cast<std::size_t>(r_)};
  }
  const std::vector<double>& features() const noexcept { return features_; }
  int label(NodeId i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {adj_.data() + offsets_[static_cast<std::size_t>(i)],
            static_cast<std::size_t>(offsets_[static_cast<std::size_t>(i) + 1] -
                                     offsets_[static_cast<std::size_t>(i)])};
  }
  NodeId degree(NodeId i) const {
    return static_cast<NodeId>(offsets_[static_cast<std::size_t>(i) + 1] -
                               offsets_[static_cast<std::size_t>(i)]);
  }
  NodeId max_degree() const noexcept { return d_max_; }

  bool is_train(NodeId i) const { return train_mask_[static_cast<std::size_t>(i)] != 0; }
  bool is_test(NodeId i) const { return test_mask_[static_cast<std::size_t>(i)] != 0; }
  const std::vector<std::uint8_t>& train_mask() const noexcept { return train_mask_; }
  const std::vector<std::uint8_t>& test_mask() const noexcept { return test_mask_; }

  /// Ascending node ids carrying the respective mask.
  std::vector<NodeId> train_nodes() const;
  std::vector<NodeId> test_nodes() const;
  NodeId num_train() const noexcept { return n_train_; }
  NodeId num_test() const noexcept { return n_test_; }

  /// Copy of this graph with masks replaced (used by the splitter).
  Graph with_masks(std::vector<std::uint8_t> train_mask,
                   std::vector<std::uint8_t> test_mask) const;

  /// Undirected edges as (u, v) with u < v, sorted.
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;

private:
  NodeId n_ = 0;
  int r_ = 0;
  int k_ = 0;
  NodeId d_max_ = 0;
  NodeId n_train_ = 0;
  NodeId n_test_ = 0;
  std::vector<double> features_;           // n x r, row-major
  std::vector<int> labels_;                // length n, values in [0, K)
  std::vector<std::int64_t> offsets_;      // CSR, length n + 1
  std::vector<NodeId> adj_;                // sorted per row
  std::vector<std::uint8_t> train_mask_;
  std::vector<std::uint8_t> test_mask_;
};

/// In/out degree vectors. Equal for undirected graphs; kept separate so the
/// normalization code reads the same for both sides.
struct DegreeInfo {
  std::vector<NodeId> in_deg;
  std::vector<NodeId> out_deg;
  NodeId d_max = 0;
};

DegreeInfo degree_info(const Graph& graph);

/// A set of normalized adjacency rows a~_i: sparse width-n vectors with
/// entries in (0, 1], one per requested node, self-loop entry always present.
struct AdjRows {
  struct Entry {
    NodeId col;
    double value;
  };
  struct Provenance {
    enum class Kind { full, mini } kind = Kind::full;
    NodeId b = 0;
    NodeId beta = 0;
    std::uint64_t seed = 0;
  };

  std::vector<NodeId> row_ids;
  std::vector<std::vector<Entry>> rows;  // entries sorted by column
  Provenance provenance;
  NodeId width = 0;

  /// Index of a row by node id, or -1.
  int find_row(NodeId node) const;
};

/// Squared 2-norm of one row; `include_self` false drops the self-loop term.
double row_squared_norm(const std::vector<AdjRows::Entry>& row, NodeId self,
                        bool include_self = true);

/// One normalized row for node i over the given sorted neighbor columns,
/// self-loop merged in column order. The row side of the normalization uses
/// `effective_in_degree`; the column side always uses graph degrees. Full
/// rows and mini rows share this so the b = n_train, beta = d_max reduction
/// is bit-exact.
std::vector<AdjRows::Entry> normalized_row(const Graph& graph, NodeId i,
                                           std::span<const NodeId> cols_sorted,
                                           NodeId effective_in_degree);

/// Rows of (D_in + I)^(-1/2) (A + I) (D_out + I)^(-1/2) for the given nodes,
/// using full-graph degrees.
AdjRows normalized_rows_full(const Graph& graph, std::span<const NodeId> node_set);

/// Stochastic block model: labels are block ids, features are i.i.d.
/// standard normal.
Graph generate_sbm(const std::vector<NodeId>& block_sizes, double intra_p,
                   double inter_p, int feature_dim, std::uint64_t seed);

/// Random d-regular graph via stub matching with swap repair.
Graph generate_random_regular(NodeId n, NodeId d, int feature_dim,
                              std::uint64_t seed);

/// Erdos-Renyi G(n, p).
Graph generate_er(NodeId n, double p, int feature_dim, std::uint64_t seed);

/// Deterministic split: |train| = round(fraction * n), remainder is test.
Graph split_train_test(const Graph& graph, double train_fraction,
                       std::uint64_t seed);

/// Line-oriented text format, round-trips features bit-exactly.
Graph load_graph(const std::string& path);
void save_graph(const Graph& graph, const std::string& path);
Graph parse_graph(const std::string& text);
std::string format_graph(const Graph& graph);

}  // namespace gnnlab
