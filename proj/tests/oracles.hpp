#pragma once

// Independent oracles used by tests only. They deliberately avoid the
// production code paths they check.

#include <optional>
#include <vector>

#include "gnnlab/rational.hpp"

namespace gnnlab::testing {

/// Brute-force transportation optimum by enumerating every basis: all
/// (m + n - 1)-subsets of cells that form a spanning tree of the bipartite
/// graph, solved by leaf stripping, kept when the flows are non-negative.
/// Exact in rational arithmetic. Only viable for tiny m, n.
inline std::optional<Rational> enumerate_transport_optimum(
    const std::vector<Rational>& cost, const std::vector<Rational>& supply,
    const std::vector<Rational>& demand) {
  int m = static_cast<int>(supply.size());
  int n = static_cast<int>(demand.size());
  int cells = m * n;
  int basis_size = m + n - 1;

  std::optional<Rational> best;
  std::vector<int> pick(static_cast<std::size_t>(basis_size));
  for (int i = 0; i < basis_size; ++i) pick[static_cast<std::size_t>(i)] = i;

  auto evaluate = [&](const std::vector<int>& chosen) {
    // Leaf stripping: repeatedly resolve a node with exactly one unresolved
    // incident basic cell; fails when the cells contain a cycle.
    std::vector<Rational> residual_s = supply;
    std::vector<Rational> residual_d = demand;
    std::vector<char> used(chosen.size(), 0);
    std::vector<Rational> flow(chosen.size());
    int resolved = 0;
    while (resolved < static_cast<int>(chosen.size())) {
      int progress = -1;
      for (std::size_t k = 0; k < chosen.size(); ++k) {
        if (used[k]) continue;
        int i = chosen[k] / n, j = chosen[k] % n;
        int row_count = 0, col_count = 0;
        for (std::size_t l = 0; l < chosen.size(); ++l) {
          if (used[l]) continue;
          if (chosen[l] / n == i) ++row_count;
          if (chosen[l] % n == j) ++col_count;
        }
        if (row_count == 1) {
          flow[k] = residual_s[static_cast<std::size_t>(i)];
          residual_d[static_cast<std::size_t>(j)] -= flow[k];
          residual_s[static_cast<std::size_t>(i)] = Rational(0);
          used[k] = 1;
          progress = static_cast<int>(k);
          break;
        }
        if (col_count == 1) {
          flow[k] = residual_d[static_cast<std::size_t>(j)];
          residual_s[static_cast<std::size_t>(i)] -= flow[k];
          residual_d[static_cast<std::size_t>(j)] = Rational(0);
          used[k] = 1;
          progress = static_cast<int>(k);
          break;
        }
      }
      if (progress < 0) return;  // cyclic, not a basis
      ++resolved;
    }
    for (const auto& r : residual_s)
      if (r != Rational(0)) return;
    for (const auto& r : residual_d)
      if (r != Rational(0)) return;
    for (const auto& f : flow)
      if (f < Rational(0)) return;  // infeasible vertex
    Rational total(0);
    for (std::size_t k = 0; k < chosen.size(); ++k)
      total += flow[k] * cost[static_cast<std::size_t>(chosen[k])];
    if (!best || total < *best) best = total;
  };

  // Iterate combinations of `basis_size` cells out of `cells`.
  while (true) {
    evaluate(pick);
    int i = basis_size - 1;
    while (i >= 0 &&
           pick[static_cast<std::size_t>(i)] == cells - basis_size + i)
      --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < basis_size; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

/// Root of f on [lo, hi] by bisection; f must change sign.
template <typename F>
double bisect(F f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    double fmid = f(mid);
    if ((flo < 0) == (fmid < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace gnnlab::testing
