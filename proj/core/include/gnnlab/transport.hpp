#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "gnnlab/error.hpp"

namespace gnnlab {

/// Optimal coupling for a dense transportation instance.
template <typename T>
struct TransportSolution {
  struct Cell {
    int row;
    int col;
    T flow;
  };
  std::vector<Cell> plan;  // cells with positive flow
  T cost{};
};

/// Exact network simplex on the bipartite transportation graph (the basis is
/// a spanning tree over row and column nodes; pivots walk the unique tree
/// cycle). Works on any ordered field type: double in production, Rational
/// in oracle tests. Supplies and demands must be non-negative with equal
/// totals; zero-mass rows/columns are allowed.
template <typename T>
class TransportSimplex {
public:
  /// `cost` is row-major m x n. `tolerance` separates "negative reduced
  /// cost" from rounding noise; pass T(0) for exact types.
  TransportSolution<T> solve(const std::vector<T>& cost,
                             const std::vector<T>& supply,
                             const std::vector<T>& demand, T tolerance = T(0)) {
    m_ = static_cast<int>(supply.size());
    n_ = static_cast<int>(demand.size());
    if (m_ < 1 || n_ < 1) throw InputError("transport instance is empty");
    if (cost.size() != static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_))
      throw InputError("cost matrix size mismatch");
    cost_ = &cost;
    tol_ = tolerance;

    init_northwest(supply, demand);

    // Dantzig's rule for speed; after a run of degenerate pivots switch to
    // Bland's rule, which cannot cycle.
    int degenerate_streak = 0;
    const int bland_threshold = 4 * (m_ + n_);
    std::int64_t pivots = 0;
    const std::int64_t pivot_limit =
        64LL * (m_ + n_) * (m_ + n_) * (m_ + n_) + 4096;
    while (true) {
      compute_potentials();
      bool bland = degenerate_streak >= bland_threshold;
      int ei = -1, ej = -1;
      if (!find_entering(bland, ei, ej)) break;
      T moved = pivot(ei, ej);
      degenerate_streak = moved == T(0) ? degenerate_streak + 1 : 0;
      if (++pivots > pivot_limit)
        throw Error("transport simplex exceeded its pivot budget");
    }

    TransportSolution<T> out;
    out.cost = T(0);
    for (const auto& cell : basis_) {
      if (cell.flow > T(0))
        out.plan.push_back({cell.row, cell.col, cell.flow});
      out.cost += cell.flow * at(cell.row, cell.col);
    }
    return out;
  }

private:
  struct BasisCell {
    int row;
    int col;
    T flow;
  };

  const T& at(int i, int j) const {
    return (*cost_)[static_cast<std::size_t>(i) * n_ + j];
  }

  void init_northwest(const std::vector<T>& supply, const std::vector<T>& demand) {
    basis_.clear();
    std::vector<T> s = supply;
    std::vector<T> d = demand;
    // One cell per step, one index advance per step, stop at the corner:
    // exactly m + n - 1 cells whatever rounding does to the masses (any
    // mismatch residue, at most an ulp with doubles, stays unshipped).
    int i = 0, j = 0;
    while (true) {
      T t = s[static_cast<std::size_t>(i)] < d[static_cast<std::size_t>(j)]
                ? s[static_cast<std::size_t>(i)]
                : d[static_cast<std::size_t>(j)];
      basis_.push_back({i, j, t});
      if (i == m_ - 1 && j == n_ - 1) break;
      bool advance_row;
      if (i == m_ - 1)
        advance_row = false;
      else if (j == n_ - 1)
        advance_row = true;
      else
        advance_row =
            !(d[static_cast<std::size_t>(j)] < s[static_cast<std::size_t>(i)]);
      if (advance_row) {
        d[static_cast<std::size_t>(j)] -= t;
        s[static_cast<std::size_t>(i)] = T(0);
        ++i;
      } else {
        s[static_cast<std::size_t>(i)] -= t;
        d[static_cast<std::size_t>(j)] = T(0);
        ++j;
      }
    }
  }

  // Tree structure over nodes 0..m-1 (rows) and m..m+n-1 (columns).
  void build_adjacency(std::vector<std::vector<int>>& adj) const {
    adj.assign(static_cast<std::size_t>(m_ + n_), {});
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      adj[static_cast<std::size_t>(basis_[k].row)].push_back(static_cast<int>(k));
      adj[static_cast<std::size_t>(m_ + basis_[k].col)].push_back(
          static_cast<int>(k));
    }
  }

  void compute_potentials() {
    u_.assign(static_cast<std::size_t>(m_), T(0));
    v_.assign(static_cast<std::size_t>(n_), T(0));
    std::vector<std::vector<int>> adj;
    build_adjacency(adj);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      for (int k : adj[static_cast<std::size_t>(node)]) {
        const auto& cell = basis_[static_cast<std::size_t>(k)];
        int other = node < m_ ? m_ + cell.col : cell.row;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        if (node < m_)
          v_[static_cast<std::size_t>(cell.col)] =
              at(cell.row, cell.col) - u_[static_cast<std::size_t>(cell.row)];
        else
          u_[static_cast<std::size_t>(cell.row)] =
              at(cell.row, cell.col) - v_[static_cast<std::size_t>(cell.col)];
        stack.push_back(other);
      }
    }
  }

  bool find_entering(bool bland, int& ei, int& ej) const {
    std::vector<char> basic(static_cast<std::size_t>(m_) * n_, 0);
    for (const auto& cell : basis_)
      basic[static_cast<std::size_t>(cell.row) * n_ + cell.col] = 1;
    T best = -tol_;
    bool found = false;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (basic[static_cast<std::size_t>(i) * n_ + j]) continue;
        T rc = at(i, j) - u_[static_cast<std::size_t>(i)] -
               v_[static_cast<std::size_t>(j)];
        if (rc < best) {
          ei = i;
          ej = j;
          best = rc;
          found = true;
          if (bland) return true;  // first negative in index order
        }
      }
    return found;
  }

  // Adds (ei, ej), walks the unique tree cycle, removes the leaving cell.
  // Returns the amount of flow moved.
  T pivot(int ei, int ej) {
    std::vector<std::vector<int>> adj;
    build_adjacency(adj);
    // Path from row node ei to column node m_ + ej through the tree.
    std::vector<int> parent_edge(static_cast<std::size_t>(m_ + n_), -1);
    std::vector<int> parent_node(static_cast<std::size_t>(m_ + n_), -1);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<int> stack{ei};
    seen[static_cast<std::size_t>(ei)] = 1;
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      if (node == m_ + ej) break;
      for (int k : adj[static_cast<std::size_t>(node)]) {
        const auto& cell = basis_[static_cast<std::size_t>(k)];
        int other = node < m_ ? m_ + cell.col : cell.row;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        parent_edge[static_cast<std::size_t>(other)] = k;
        parent_node[static_cast<std::size_t>(other)] = node;
        stack.push_back(other);
      }
    }

    // Cells along the path, starting at the column end; odd positions from
    // the entering arc lose flow.
    std::vector<int> path;
    for (int node = m_ + ej; node != ei;
         node = parent_node[static_cast<std::size_t>(node)]) {
      path.push_back(parent_edge[static_cast<std::size_t>(node)]);
      if (parent_node[static_cast<std::size_t>(node)] < 0)
        throw Error("transport basis is not connected");
    }
    // Orientation: entering (+), then alternating along the cycle. The first
    // path cell (adjacent to the column node) is a (-) position.
    T theta{};
    int leaving = -1;
    bool first = true;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const auto& cell = basis_[static_cast<std::size_t>(path[p])];
      // Ties break on the fixed (row, col) identity of the arc, which is
      // what Bland's rule needs to rule out cycling.
      bool better = first || cell.flow < theta;
      if (!better && cell.flow == theta && leaving >= 0) {
        const auto& cur = basis_[static_cast<std::size_t>(leaving)];
        better = cell.row < cur.row || (cell.row == cur.row && cell.col < cur.col);
      }
      if (better) {
        theta = cell.flow;
        leaving = path[p];
        first = false;
      }
    }
    if (leaving < 0) throw Error("transport pivot found no leaving arc");

    for (std::size_t p = 0; p < path.size(); ++p) {
      auto& cell = basis_[static_cast<std::size_t>(path[p])];
      if (p % 2 == 0)
        cell.flow -= theta;
      else
        cell.flow += theta;
    }
    basis_[static_cast<std::size_t>(leaving)] = {ei, ej, theta};
    return theta;
  }

  int m_ = 0;
  int n_ = 0;
  const std::vector<T>* cost_ = nullptr;
  T tol_{};
  std::vector<BasisCell> basis_;
  std::vector<T> u_;
  std::vector<T> v_;
};

}  // namespace gnnlab
