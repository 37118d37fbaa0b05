#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gnnlab/error.hpp"
#include "gnnlab/rng.hpp"
#include "gnnlab/sampling.hpp"
#include "test_helpers.hpp"

using namespace gnnlab;
using gnnlab::testing::make_graph;
using gnnlab::testing::row_value;

namespace {

bool rows_equal(const AdjRows& a, const AdjRows& b) {
  if (a.row_ids != b.row_ids || a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].size() != b.rows[i].size()) return false;
    for (std::size_t k = 0; k < a.rows[i].size(); ++k)
      if (a.rows[i][k].col != b.rows[i][k].col ||
          a.rows[i][k].value != b.rows[i][k].value)
        return false;
  }
  return true;
}

}  // namespace

TEST_CASE("batch of size n_train is exactly the training set") {
  auto g = split_train_test(generate_er(10, 0.4, 1, 3), 0.5, 7);
  SamplerConfig cfg{g.num_train(), 1, 42, false, MiniNormalization::sampled_in_degree};
  auto batch = sample_batch(g, cfg, 0);
  std::set<NodeId> got(batch.begin(), batch.end());
  auto train = g.train_nodes();
  CHECK(got == std::set<NodeId>(train.begin(), train.end()));
}

TEST_CASE("batches are deterministic and nested") {
  auto g = split_train_test(generate_er(30, 0.2, 1, 3), 0.7, 7);
  SamplerConfig five{5, 1, 9, true, MiniNormalization::sampled_in_degree};
  SamplerConfig ten{10, 1, 9, true, MiniNormalization::sampled_in_degree};

  auto a = sample_batch(g, five, 3);
  auto b = sample_batch(g, five, 3);
  CHECK(a == b);

  auto large = sample_batch(g, ten, 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == large[i]);

  auto other_iter = sample_batch(g, five, 4);
  CHECK(a != other_iter);  // fresh batch per iteration

  SamplerConfig too_big{g.num_train() + 1, 1, 9, false,
                        MiniNormalization::sampled_in_degree};
  CHECK_THROWS_AS(sample_batch(g, too_big, 0), InputError);
}

TEST_CASE("sampled neighbor counts are min(deg, beta)") {
  auto g = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}});
  auto mb = sample_neighbors(g, {0, 1, 3}, 2, 5, 1);
  CHECK(mb.sampled_neighbors[0].size() == 2);  // deg 4 capped at 2
  CHECK(mb.sampled_neighbors[1].size() == 2);  // deg 2
  CHECK(mb.sampled_neighbors[2].size() == 1);  // deg 1
  for (std::size_t t = 0; t < mb.target_nodes.size(); ++t) {
    auto nbrs = g.neighbors(mb.target_nodes[t]);
    for (NodeId s : mb.sampled_neighbors[t])
      CHECK(std::find(nbrs.begin(), nbrs.end(), s) != nbrs.end());
  }
}

TEST_CASE("beta >= all degrees reproduces the full rows") {
  auto g = generate_sbm({6, 6}, 0.5, 0.2, 2, 8);
  auto targets = g.train_nodes();
  auto mb = sample_neighbors(g, targets, g.max_degree(), 3, 2);
  auto full = normalized_rows_full(g, targets);
  CHECK(rows_equal(mb.adj, full));
}

TEST_CASE("two-neighbor node under beta=1 picks each side half the time") {
  auto g = make_graph(3, {{0, 1}, {0, 2}});
  int picked_first = 0;
  const int draws = 10000;
  for (int it = 0; it < draws; ++it) {
    auto mb = sample_neighbors(g, {0}, 1, 77, it);
    REQUIRE(mb.sampled_neighbors[0].size() == 1);
    if (mb.sampled_neighbors[0][0] == 1) ++picked_first;
  }
  double freq = static_cast<double>(picked_first) / draws;
  CHECK(freq == doctest::Approx(0.5).epsilon(0.04));  // 0.5 +- 0.02
}

TEST_CASE("neighbor selection is uniform (chi-square at 0.001)") {
  // Star with 5 leaves, beta = 1: multinomial(1/5) over leaves.
  auto g = make_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  std::map<NodeId, int> counts;
  const int draws = 20000;
  for (int it = 0; it < draws; ++it) {
    auto mb = sample_neighbors(g, {0}, 1, 13, it);
    ++counts[mb.sampled_neighbors[0][0]];
  }
  double expected = draws / 5.0;
  double chi2 = 0.0;
  for (NodeId leaf = 1; leaf <= 5; ++leaf) {
    double d = counts[leaf] - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 18.47);  // 4 dof, significance 0.001

  // And per-neighbor inclusion frequency beta/d for beta = 2, d = 4.
  auto g2 = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  std::map<NodeId, int> inc;
  for (int it = 0; it < draws; ++it) {
    auto mb = sample_neighbors(g2, {0}, 2, 29, it);
    for (NodeId s : mb.sampled_neighbors[0]) ++inc[s];
  }
  for (NodeId leaf = 1; leaf <= 4; ++leaf)
    CHECK(static_cast<double>(inc[leaf]) / draws ==
          doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("same (seed, iteration) repeats; shared targets keep their samples") {
  auto g = split_train_test(generate_er(20, 0.4, 1, 5), 0.8, 3);
  auto t1 = sample_batch(g, {4, 3, 11, true, MiniNormalization::sampled_in_degree}, 6);
  auto t2 = sample_batch(g, {9, 3, 11, true, MiniNormalization::sampled_in_degree}, 6);
  auto mb1 = sample_neighbors(g, t1, 2, 11, 6);
  auto mb2 = sample_neighbors(g, t2, 2, 11, 6);
  // Nested batches: the smaller target list is a prefix, and each shared
  // target's sampled neighbor set is identical.
  for (std::size_t i = 0; i < t1.size(); ++i) {
    CHECK(t1[i] == t2[i]);
    CHECK(mb1.sampled_neighbors[i] == mb2.sampled_neighbors[i]);
  }
}

TEST_CASE("reduction: b = n_train, beta = d_max gives full rows bit-exactly") {
  auto g = split_train_test(generate_sbm({10, 10}, 0.4, 0.1, 2, 17), 0.6, 2);
  SamplerConfig cfg{g.num_train(), g.max_degree(), 123, false,
                    MiniNormalization::sampled_in_degree};
  auto targets = sample_batch(g, cfg, 1);
  std::sort(targets.begin(), targets.end());
  auto mb = sample_neighbors(g, targets, g.max_degree(), 123, 1);
  auto full = normalized_rows_full(g, targets);
  CHECK(rows_equal(mb.adj, full));
}

TEST_CASE("virtual rows: beta = d_max equals full rows; leaves never change") {
  auto g = split_train_test(generate_sbm({8, 8}, 0.35, 0.1, 2, 23), 0.5, 5);
  auto train = g.train_nodes();
  auto full = normalized_rows_full(g, train);

  auto at_dmax = virtual_rows_all_train(g, g.max_degree(), 7);
  CHECK(rows_equal(at_dmax, full));

  auto again = virtual_rows_all_train(g, 2, 7);
  auto again2 = virtual_rows_all_train(g, 2, 7);
  CHECK(rows_equal(again, again2));

  // A degree-1 training node has nothing to subsample at any beta.
  auto leafy = make_graph(4, {{0, 1}, {1, 2}, {1, 3}});
  auto leaf_rows = virtual_rows_all_train(leafy, 1, 99);
  auto leaf_full = normalized_rows_full(leafy, std::vector<NodeId>{0});
  int k = leaf_rows.find_row(0);
  REQUIRE(k >= 0);
  CHECK(leaf_rows.rows[static_cast<std::size_t>(k)].size() ==
        leaf_full.rows[0].size());
  for (std::size_t e = 0; e < leaf_full.rows[0].size(); ++e) {
    CHECK(leaf_rows.rows[static_cast<std::size_t>(k)][e].col ==
          leaf_full.rows[0][e].col);
    CHECK(leaf_rows.rows[static_cast<std::size_t>(k)][e].value ==
          leaf_full.rows[0][e].value);
  }
}

TEST_CASE("row norms respect the fan-out bound") {
  // ||a~mini||^2 <= beta + 1 with the self-loop, <= beta without.
  RngStream pick(5, RngDomain::generator);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = split_train_test(
        generate_er(25, 0.15 + 0.02 * (trial % 5), 1, 100 + trial), 0.6,
        trial);
    NodeId beta = static_cast<NodeId>(1 + pick.next_below(4));
    auto rows = virtual_rows_all_train(g, beta, trial);
    for (std::size_t i = 0; i < rows.rows.size(); ++i) {
      NodeId self = rows.row_ids[i];
      CHECK(row_squared_norm(rows.rows[i], self, true) <=
            static_cast<double>(beta) + 1.0);
      CHECK(row_squared_norm(rows.rows[i], self, false) <=
            static_cast<double>(beta));
    }
  }
}

TEST_CASE("full-degree normalization keeps full-row weights on sampled columns") {
  auto g = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
  auto mb = sample_neighbors(g, {0}, 1, 3, 0, MiniNormalization::full_degree);
  // Row keeps 1/sqrt(deg+1) scaling: self = 1/4, sampled = 1/sqrt(4*2).
  CHECK(row_value(mb.adj, 0, 0) == doctest::Approx(0.25));
  REQUIRE(mb.sampled_neighbors[0].size() == 1);
  CHECK(row_value(mb.adj, 0, mb.sampled_neighbors[0][0]) ==
        doctest::Approx(1.0 / std::sqrt(8.0)));
}
