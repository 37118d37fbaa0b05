#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "gnnlab/error.hpp"
#include "gnnlab/graph.hpp"
#include "gnnlab/rng.hpp"

namespace gnnlab {

namespace {

std::vector<double> gaussian_features(NodeId n, int r, RngStream& rng) {
  std::vector<double> x(static_cast<std::size_t>(n) * r);
  for (auto& v : x) v = rng.next_normal();
  return x;
}

Graph assemble(NodeId n, int r, int k, std::vector<double> features,
               std::vector<int> labels,
               std::vector<std::pair<NodeId, NodeId>> edges) {
  // Freshly generated graphs start out with every node in the training set;
  // split_train_test reassigns the masks.
  std::vector<std::uint8_t> train(static_cast<std::size_t>(n), 1);
  std::vector<std::uint8_t> test(static_cast<std::size_t>(n), 0);
  return Graph(n, r, k, std::move(features), std::move(labels), edges,
               std::move(train), std::move(test));
}

}  // namespace

Graph generate_sbm(const std::vector<NodeId>& block_sizes, double intra_p,
                   double inter_p, int feature_dim, std::uint64_t seed) {
  if (block_sizes.empty()) throw InputError("sbm needs at least one block");
  for (NodeId s : block_sizes)
    if (s < 1) throw InputError("sbm block sizes must be at least 1");
  if (intra_p < 0.0 || intra_p > 1.0 || inter_p < 0.0 || inter_p > 1.0)
    throw InputError("sbm probabilities must lie in [0, 1]");

  NodeId n = std::accumulate(block_sizes.begin(), block_sizes.end(), NodeId{0});
  std::vector<int> labels(static_cast<std::size_t>(n));
  NodeId next = 0;
  for (std::size_t blk = 0; blk < block_sizes.size(); ++blk)
    for (NodeId j = 0; j < block_sizes[blk]; ++j)
      labels[static_cast<std::size_t>(next++)] = static_cast<int>(blk);

  RngStream rng(seed, RngDomain::generator);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      double p = labels[static_cast<std::size_t>(u)] ==
                         labels[static_cast<std::size_t>(v)]
                     ? intra_p
                     : inter_p;
      if (rng.next_double() < p) edges.emplace_back(u, v);
    }

  auto features = gaussian_features(n, feature_dim, rng);
  return assemble(n, feature_dim, static_cast<int>(block_sizes.size()),
                  std::move(features), std::move(labels), std::move(edges));
}

Graph generate_random_regular(NodeId n, NodeId d, int feature_dim,
                              std::uint64_t seed) {
  if (n < 1) throw InputError("regular graph needs n >= 1");
  if (d < 0 || d >= n) throw InputError("regular graph needs 0 <= d < n");
  if ((static_cast<std::int64_t>(n) * d) % 2 != 0)
    throw InputError("regular graph needs n*d even");

  RngStream rng(seed, RngDomain::generator);
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (d > 0) {
    std::vector<NodeId> stubs(static_cast<std::size_t>(n) * d);
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < d; ++j)
        stubs[static_cast<std::size_t>(i) * d + j] = i;

    // Stub matching; conflicting pairs (self-loops or duplicates) are fixed
    // by swapping with a previously accepted edge, restarting if stuck.
    for (int attempt = 0; attempt < 1000; ++attempt) {
      rng.shuffle(stubs);
      edges.clear();
      std::set<std::pair<NodeId, NodeId>> seen;
      bool ok = true;
      for (std::size_t p = 0; p + 1 < stubs.size(); p += 2) {
        NodeId u = stubs[p], v = stubs[p + 1];
        if (u > v) std::swap(u, v);
        bool bad = (u == v) || seen.count({u, v}) > 0;
        if (bad) {
          // Try to swap endpoints with a random accepted edge.
          bool repaired = false;
          for (int tries = 0; tries < 200 && !edges.empty(); ++tries) {
            auto pick = static_cast<std::size_t>(rng.next_below(edges.size()));
            auto [x, y] = edges[pick];
            NodeId a = stubs[p], b = stubs[p + 1];
            NodeId e1u = std::min(a, x), e1v = std::max(a, x);
            NodeId e2u = std::min(b, y), e2v = std::max(b, y);
            if (a == x || b == y || e1u == e1v || e2u == e2v) continue;
            if (seen.count({e1u, e1v}) || seen.count({e2u, e2v})) continue;
            if (std::pair(e1u, e1v) == std::pair(e2u, e2v)) continue;
            seen.erase({x, y});
            edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(pick));
            seen.insert({e1u, e1v});
            edges.emplace_back(e1u, e1v);
            seen.insert({e2u, e2v});
            edges.emplace_back(e2u, e2v);
            repaired = true;
            break;
          }
          if (!repaired) {
            ok = false;
            break;
          }
        } else {
          seen.insert({u, v});
          edges.emplace_back(u, v);
        }
      }
      if (ok) break;
      edges.clear();
    }
    if (edges.size() != static_cast<std::size_t>(n) * d / 2)
      throw InputError("random regular generation failed to converge");
  }

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  auto features = gaussian_features(n, feature_dim, rng);
  return assemble(n, feature_dim, 1, std::move(features), std::move(labels),
                  std::move(edges));
}

Graph generate_er(NodeId n, double p, int feature_dim, std::uint64_t seed) {
  if (n < 1) throw InputError("er graph needs n >= 1");
  if (p < 0.0 || p > 1.0) throw InputError("er probability must lie in [0, 1]");

  RngStream rng(seed, RngDomain::generator);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.next_double() < p) edges.emplace_back(u, v);

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  auto features = gaussian_features(n, feature_dim, rng);
  return assemble(n, feature_dim, 1, std::move(features), std::move(labels),
                  std::move(edges));
}

Graph split_train_test(const Graph& graph, double train_fraction,
                       std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InputError("train fraction must lie strictly between 0 and 1");
  NodeId n = graph.num_nodes();
  auto n_train = static_cast<NodeId>(
      std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n)
    throw InputError("train fraction yields an empty split");

  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), NodeId{0});
  RngStream rng(seed, RngDomain::split);
  rng.shuffle(order);

  std::vector<std::uint8_t> train(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> test(static_cast<std::size_t>(n), 0);
  for (NodeId i = 0; i < n; ++i) {
    if (i < n_train)
      train[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
    else
      test[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
  }
  return graph.with_masks(std::move(train), std::move(test));
}

}  // namespace gnnlab
