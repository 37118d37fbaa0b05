#include <doctest.h>

#include <cmath>
#include <vector>

#include "gnnlab/error.hpp"
#include "gnnlab/rational.hpp"
#include "gnnlab/rng.hpp"
#include "gnnlab/transport.hpp"
#include "oracles.hpp"

using namespace gnnlab;
using gnnlab::testing::enumerate_transport_optimum;

TEST_CASE("zero-cost diagonal matching") {
  TransportSimplex<double> solver;
  std::vector<double> cost{0.0, 1.0, 1.0, 0.0};
  auto sol = solver.solve(cost, {0.5, 0.5}, {0.5, 0.5}, 1e-12);
  CHECK(sol.cost == doctest::Approx(0.0));
  for (const auto& cell : sol.plan) {
    CHECK(cell.row == cell.col);
    CHECK(cell.flow == doctest::Approx(0.5));
  }
}

TEST_CASE("mass forced across costs the full unit") {
  TransportSimplex<double> solver;
  std::vector<double> cost{0.0, 1.0, 1.0, 0.0};
  auto sol = solver.solve(cost, {1.0, 0.0}, {0.0, 1.0}, 1e-12);
  CHECK(sol.cost == doctest::Approx(1.0));
}

TEST_CASE("1x1 and degenerate zero-mass marginals") {
  TransportSimplex<double> one;
  auto sol = one.solve({3.0}, {1.0}, {1.0}, 1e-12);
  CHECK(sol.cost == doctest::Approx(3.0));

  TransportSimplex<double> degenerate;
  std::vector<double> cost{5.0, 1.0, 2.0, 0.0, 7.0, 3.0};
  auto sol2 = degenerate.solve(cost, {1.0, 0.0}, {0.25, 0.0, 0.75}, 1e-12);
  CHECK(sol2.cost == doctest::Approx(5.0 * 0.25 + 2.0 * 0.75));
}

TEST_CASE("rational 3x3 instances match the vertex-enumeration oracle exactly") {
  const std::vector<std::vector<Rational>> masses = {
      {{1, 2}, {1, 4}, {1, 4}}, {{1, 3}, {1, 3}, {1, 3}},
      {{1, 6}, {2, 6}, {3, 6}}, {{1, 5}, {2, 5}, {2, 5}},
      {{1, 1}, {0, 1}, {0, 1}},
  };
  RngStream rng(31, RngDomain::generator);
  int checked = 0;
  for (const auto& supply : masses)
    for (const auto& demand : masses) {
      std::vector<Rational> cost(9);
      for (auto& c : cost)
        c = Rational(static_cast<std::int64_t>(rng.next_below(20)));

      TransportSimplex<Rational> solver;
      auto sol = solver.solve(cost, supply, demand, Rational(0));
      auto oracle = enumerate_transport_optimum(cost, supply, demand);
      REQUIRE(oracle.has_value());
      CHECK(sol.cost == *oracle);
      ++checked;
    }
  CHECK(checked == 25);
}

TEST_CASE("double solver agrees with the rational solver") {
  RngStream rng(77, RngDomain::generator);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 2 + static_cast<int>(rng.next_below(3));
    int n = 2 + static_cast<int>(rng.next_below(3));
    std::vector<Rational> cost_q;
    std::vector<double> cost_d;
    for (int k = 0; k < m * n; ++k) {
      auto c = static_cast<std::int64_t>(rng.next_below(50));
      cost_q.push_back(Rational(c));
      cost_d.push_back(static_cast<double>(c));
    }
    // Integer masses keep both representations exact.
    std::vector<Rational> supply_q;
    std::vector<double> supply_d;
    std::vector<Rational> demand_q;
    std::vector<double> demand_d;
    std::int64_t total = 0;
    for (int i = 0; i < m; ++i) {
      auto s = static_cast<std::int64_t>(1 + rng.next_below(9));
      supply_q.push_back(Rational(s));
      supply_d.push_back(static_cast<double>(s));
      total += s;
    }
    std::int64_t rest = total;
    for (int j = 0; j < n; ++j) {
      std::int64_t d = j + 1 == n ? rest
                                  : static_cast<std::int64_t>(
                                        rng.next_below(static_cast<std::uint64_t>(
                                            rest - (n - 1 - j))) + 1);
      demand_q.push_back(Rational(d));
      demand_d.push_back(static_cast<double>(d));
      rest -= d;
    }

    TransportSimplex<Rational> exact;
    TransportSimplex<double> approx;
    auto sq = exact.solve(cost_q, supply_q, demand_q, Rational(0));
    auto sd = approx.solve(cost_d, supply_d, demand_d, 1e-9);
    CHECK(sd.cost == doctest::Approx(sq.cost.to_double()).epsilon(1e-12));
  }
}

TEST_CASE("plans satisfy their marginals") {
  RngStream rng(5, RngDomain::generator);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 3 + static_cast<int>(rng.next_below(4));
    int n = 3 + static_cast<int>(rng.next_below(4));
    std::vector<double> cost(static_cast<std::size_t>(m) * n);
    for (auto& c : cost) c = rng.next_double() * 10.0;
    std::vector<double> supply(m, 1.0 / m);
    std::vector<double> demand(n, 1.0 / n);
    TransportSimplex<double> solver;
    auto sol = solver.solve(cost, supply, demand, 1e-13);

    std::vector<double> row(m, 0.0), col(n, 0.0);
    for (const auto& cell : sol.plan) {
      CHECK(cell.flow > 0.0);
      row[static_cast<std::size_t>(cell.row)] += cell.flow;
      col[static_cast<std::size_t>(cell.col)] += cell.flow;
    }
    for (int i = 0; i < m; ++i) CHECK(std::abs(row[i] - supply[i]) <= 1e-9);
    for (int j = 0; j < n; ++j) CHECK(std::abs(col[j] - demand[j]) <= 1e-9);
  }
}

TEST_CASE("input validation") {
  TransportSimplex<double> solver;
  CHECK_THROWS_AS(solver.solve({}, {}, {}, 1e-12), InputError);
  CHECK_THROWS_AS(solver.solve({1.0, 2.0}, {1.0}, {1.0}, 1e-12), InputError);
}
