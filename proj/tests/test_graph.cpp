#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "gnnlab/error.hpp"
#include "gnnlab/graph.hpp"
#include "test_helpers.hpp"

using namespace gnnlab;
using gnnlab::testing::make_graph;
using gnnlab::testing::row_value;

TEST_CASE("graph construction rejects bad input") {
  CHECK_THROWS_AS(make_graph(2, {{0, 0}}), InputError);       // self-loop
  CHECK_THROWS_AS(make_graph(2, {{0, 1}, {0, 1}}), InputError);  // duplicate
  CHECK_THROWS_AS(make_graph(2, {{0, 2}}), InputError);       // out of range
  CHECK_THROWS_AS(make_graph(2, {}, 1, {0, 5}), InputError);  // label range
  // overlapping masks
  CHECK_THROWS_AS(make_graph(2, {}, 1, {0, 0}, {1, 1}, {1, 0}), InputError);
  // empty training set
  CHECK_THROWS_AS(make_graph(2, {}, 1, {0, 0}, {0, 0}, {1, 1}), InputError);
}

TEST_CASE("degrees and d_max cover the whole graph including test nodes") {
  auto g = make_graph(4, {{0, 1}, {1, 2}, {1, 3}}, 1, {0, 0, 0, 0},
                      {1, 0, 1, 0}, {0, 1, 0, 1});
  CHECK(g.degree(1) == 3);
  CHECK(g.max_degree() == 3);  // node 1 is a test node
  auto info = degree_info(g);
  CHECK(info.d_max == 3);
  CHECK(info.in_deg == info.out_deg);
}

TEST_CASE("normalized row of an isolated node is the identity entry") {
  auto g = make_graph(1, {});
  std::vector<NodeId> nodes{0};
  auto rows = normalized_rows_full(g, nodes);
  REQUIRE(rows.rows.size() == 1);
  REQUIRE(rows.rows[0].size() == 1);
  CHECK(rows.rows[0][0].col == 0);
  CHECK(rows.rows[0][0].value == doctest::Approx(1.0));
}

TEST_CASE("normalized rows of a single edge are {0.5, 0.5}") {
  auto g = make_graph(2, {{0, 1}});
  std::vector<NodeId> nodes{0, 1};
  auto rows = normalized_rows_full(g, nodes);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(row_value(rows, i, 0) == doctest::Approx(0.5));
    CHECK(row_value(rows, i, 1) == doctest::Approx(0.5));
  }
}

TEST_CASE("normalized row of the middle of a 3-path") {
  // Path 0-1-2; row of node 1: self 1/3, ends 1/sqrt(6).
  auto g = make_graph(3, {{0, 1}, {1, 2}});
  std::vector<NodeId> nodes{1};
  auto rows = normalized_rows_full(g, nodes);
  CHECK(row_value(rows, 0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(row_value(rows, 0, 0) == doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(row_value(rows, 0, 2) == doctest::Approx(1.0 / std::sqrt(6.0)));
}

TEST_CASE("full normalization is symmetric on undirected graphs") {
  auto g = generate_er(20, 0.3, 2, 11);
  std::vector<NodeId> all;
  for (NodeId i = 0; i < 20; ++i) all.push_back(i);
  auto rows = normalized_rows_full(g, all);
  for (NodeId i = 0; i < 20; ++i)
    for (NodeId j = 0; j < 20; ++j)
      CHECK(row_value(rows, static_cast<std::size_t>(i), j) ==
            doctest::Approx(row_value(rows, static_cast<std::size_t>(j), i)));
}

TEST_CASE("row entries lie in (0,1] and squared norm is below nnz") {
  auto g = generate_sbm({10, 10}, 0.4, 0.1, 3, 5);
  std::vector<NodeId> all;
  for (NodeId i = 0; i < 20; ++i) all.push_back(i);
  auto rows = normalized_rows_full(g, all);
  for (std::size_t i = 0; i < rows.rows.size(); ++i) {
    double sq = 0.0;
    for (const auto& e : rows.rows[i]) {
      CHECK(e.value > 0.0);
      CHECK(e.value <= 1.0);
      sq += e.value * e.value;
    }
    CHECK(sq <= static_cast<double>(rows.rows[i].size()));
  }
}

TEST_CASE("sbm limit cases") {
  auto single = generate_sbm({1}, 1.0, 1.0, 2, 3);
  CHECK(single.num_nodes() == 1);
  CHECK(single.num_edges() == 0);

  auto deterministic = generate_sbm({2, 2}, 1.0, 0.0, 1, 3);
  CHECK(deterministic.num_edges() == 2);
  CHECK(deterministic.label(0) == 0);
  CHECK(deterministic.label(1) == 0);
  CHECK(deterministic.label(2) == 1);
  CHECK(deterministic.label(3) == 1);
  CHECK(deterministic.degree(0) == 1);
  auto nbrs = deterministic.neighbors(0);
  CHECK(nbrs[0] == 1);
}

TEST_CASE("sbm edge count stays within 3 sigma of its expectation") {
  auto g = generate_sbm({50, 50}, 0.3, 0.02, 2, 12345);
  double intra_pairs = 2.0 * (50.0 * 49.0 / 2.0);
  double inter_pairs = 2500.0;
  double mean = 0.3 * intra_pairs + 0.02 * inter_pairs;
  double var = intra_pairs * 0.3 * 0.7 + inter_pairs * 0.02 * 0.98;
  double sigma = std::sqrt(var);
  CHECK(std::abs(static_cast<double>(g.num_edges()) - mean) <= 3.0 * sigma);
}

TEST_CASE("random regular graphs have exact degrees") {
  auto tiny = generate_random_regular(4, 1, 1, 7);
  CHECK(tiny.num_edges() == 2);
  for (NodeId i = 0; i < 4; ++i) CHECK(tiny.degree(i) == 1);

  auto g = generate_random_regular(100, 10, 2, 99);
  for (NodeId i = 0; i < 100; ++i) CHECK(g.degree(i) == 10);

  CHECK_THROWS_AS(generate_random_regular(4, 4, 1, 0), InputError);
  CHECK_THROWS_AS(generate_random_regular(5, 3, 1, 0), InputError);  // odd n*d
}

TEST_CASE("er with p = 1 is complete") {
  auto g = generate_er(3, 1.0, 1, 1);
  CHECK(g.num_edges() == 3);
}

TEST_CASE("split sizes follow the rounding rule and seeds repeat") {
  auto g4 = generate_er(4, 0.5, 1, 8);
  auto s4 = split_train_test(g4, 0.5, 1);
  CHECK(s4.num_train() == 2);
  CHECK(s4.num_test() == 2);

  auto s4b = split_train_test(g4, 0.5, 1);
  CHECK(s4.train_mask() == s4b.train_mask());

  auto g1000 = generate_er(1000, 0.002, 1, 8);
  auto s1000 = split_train_test(g1000, 0.62, 3);
  CHECK(s1000.num_train() == 620);
  CHECK(s1000.num_test() == 380);

  CHECK_THROWS_AS(split_train_test(g4, 0.01, 1), InputError);
  CHECK_THROWS_AS(split_train_test(g4, 1.5, 1), InputError);
}

TEST_CASE("graph text format round-trips bit-exactly") {
  auto g = split_train_test(generate_sbm({7, 6}, 0.5, 0.1, 3, 21), 0.5, 4);
  auto text = format_graph(g);
  auto back = parse_graph(text);
  CHECK(format_graph(back) == text);
  CHECK(back.num_nodes() == g.num_nodes());
  CHECK(back.features() == g.features());  // 17 significant digits round-trip
  CHECK(back.labels() == g.labels());
  CHECK(back.train_mask() == g.train_mask());
  CHECK(back.edge_list() == g.edge_list());
}

TEST_CASE("hand-written two-node fixture parses") {
  std::string text =
      "nodes 2 features 1 classes 2\n"
      "node 0 0 1.5\n"
      "node 1 1 -2\n"
      "edge 0 1\n"
      "train 0\n"
      "test 1\n";
  auto g = parse_graph(text);
  CHECK(g.num_nodes() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.label(1) == 1);
  CHECK(g.feature_row(0)[0] == 1.5);
  CHECK(g.num_train() == 1);
}

TEST_CASE("parse errors carry line numbers") {
  std::string dup =
      "nodes 2 features 1 classes 1\n"
      "node 0 0 1\n"
      "node 1 0 1\n"
      "edge 0 1\n"
      "edge 0 1\n";
  try {
    parse_graph(dup);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }

  CHECK_THROWS_AS(parse_graph("nodes 1 features 1\n"), ParseError);
  CHECK_THROWS_AS(
      parse_graph("nodes 1 features 1 classes 1\nnode 0 0 zzz\n"), ParseError);
  CHECK_THROWS_AS(
      parse_graph("nodes 2 features 1 classes 1\nnode 0 0 1\nnode 1 0 1\nedge 1 0\n"),
      ParseError);
}

TEST_CASE("save and load through the filesystem") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "gnnlab_graph_io_test";
  fs::create_directories(dir);
  auto path = (dir / "g.txt").string();
  auto g = split_train_test(generate_er(12, 0.3, 2, 5), 0.5, 9);
  save_graph(g, path);
  auto back = load_graph(path);
  CHECK(format_graph(back) == format_graph(g));
  fs::remove_all(dir);
}
