#include "gnnlab/distance.hpp"

#include <algorithm>
#include <cmath>

#include "gnnlab/error.hpp"
#include "gnnlab/rng.hpp"

namespace gnnlab {

namespace {

// Squared 2-norm of the difference of two sparse rows (sorted columns).
double sparse_diff_squared(const std::vector<AdjRows::Entry>& a,
                           const std::vector<AdjRows::Entry>& b) {
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].col < b[j].col)) {
      sum += a[i].value * a[i].value;
      ++i;
    } else if (i >= a.size() || b[j].col < a[i].col) {
      sum += b[j].value * b[j].value;
      ++j;
    } else {
      double d = a[i].value - b[j].value;
      sum += d * d;
      ++i;
      ++j;
    }
  }
  return sum;
}

double sparse_squared(const std::vector<AdjRows::Entry>& a) {
  double sum = 0.0;
  for (const auto& e : a) sum += e.value * e.value;
  return sum;
}

}  // namespace

double TransportPlan::max_marginal_residual() const {
  std::vector<double> row_sum(row_marginals.size(), 0.0);
  std::vector<double> col_sum(col_marginals.size(), 0.0);
  for (const auto& e : plan) {
    row_sum[e.i] += e.mass;
    col_sum[e.j] += e.mass;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < row_sum.size(); ++i)
    worst = std::max(worst, std::abs(row_sum[i] - row_marginals[i]));
  for (std::size_t j = 0; j < col_sum.size(); ++j)
    worst = std::max(worst, std::abs(col_sum[j] - col_marginals[j]));
  return worst;
}

std::vector<double> delta_full(const AdjRows& full_train_rows,
                               const AdjRows& full_test_rows) {
  if (full_train_rows.width != full_test_rows.width)
    throw InputError("row widths do not match");
  std::size_t m = full_train_rows.rows.size();
  std::size_t n = full_test_rows.rows.size();
  std::vector<double> out(m * n);
  std::vector<double> test_norm(n);
  for (std::size_t j = 0; j < n; ++j)
    test_norm[j] = sparse_squared(full_test_rows.rows[j]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i * n + j] =
          sparse_diff_squared(full_test_rows.rows[j], full_train_rows.rows[i]) +
          2.0 * test_norm[j];
  return out;
}

std::vector<double> delta_full_mini(const AdjRows& full_train_rows,
                                    const AdjRows& mini_rows) {
  std::size_t m = full_train_rows.rows.size();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    int k = mini_rows.find_row(full_train_rows.row_ids[i]);
    if (k < 0)
      throw InputError("missing mini row for training node " +
                       std::to_string(full_train_rows.row_ids[i]));
    out[i] = sparse_diff_squared(full_train_rows.rows[i],
                                 mini_rows.rows[static_cast<std::size_t>(k)]);
  }
  return out;
}

CostMatrix build_cost(const Graph& graph, NodeId beta, NodeId b,
                      std::uint64_t seed, const CostOptions& options) {
  if (beta < 1) throw InputError("fan-out size must be at least 1");
  if (b < 1 || b > graph.num_train())
    throw InputError("batch size outside [1, n_train]");
  if (options.h < 1) throw InputError("hidden dimension must be at least 1");
  if (options.draws < 1) throw InputError("draw count must be at least 1");
  if (graph.num_test() < 1) throw InputError("test split is empty");

  CostMatrix cost;
  cost.train_ids = graph.train_nodes();
  cost.test_ids = graph.test_nodes();
  cost.c_delta = options.c_delta;
  cost.h = options.h;
  cost.n_min = std::min(graph.num_train(), graph.num_test());
  cost.scale = options.c_delta * static_cast<double>(options.h) *
               static_cast<double>(options.h) / static_cast<double>(cost.n_min);

  AdjRows train_rows = normalized_rows_full(graph, cost.train_ids);
  AdjRows test_rows = normalized_rows_full(graph, cost.test_ids);
  cost.delta_full = delta_full(train_rows, test_rows);

  // Nested batch: prefix of the seed-keyed permutation of training nodes.
  SamplerConfig batch_cfg;
  batch_cfg.b = b;
  batch_cfg.beta = beta;
  batch_cfg.seed = seed;
  batch_cfg.nested = true;
  auto batch = sample_batch(graph, batch_cfg, 0);
  std::vector<std::uint8_t> in_batch(static_cast<std::size_t>(graph.num_nodes()), 0);
  for (NodeId t : batch) in_batch[static_cast<std::size_t>(t)] = 1;

  cost.delta_full_mini.assign(cost.train_ids.size(), 0.0);
  for (int draw = 0; draw < options.draws; ++draw) {
    AdjRows mini = virtual_rows_all_train(graph, beta, seed,
                                          static_cast<std::uint64_t>(draw),
                                          options.normalization);
    auto dfm = delta_full_mini(train_rows, mini);
    for (std::size_t i = 0; i < dfm.size(); ++i)
      cost.delta_full_mini[i] += dfm[i] / options.draws;
  }
  // Training nodes outside the batch have no sampled row this step; their
  // mini row is the zero row, so the difference is the full row itself.
  for (std::size_t i = 0; i < cost.train_ids.size(); ++i)
    if (!in_batch[static_cast<std::size_t>(cost.train_ids[i])])
      cost.delta_full_mini[i] = sparse_squared(train_rows.rows[i]);

  std::size_t n = cost.test_ids.size();
  cost.entries.resize(cost.train_ids.size() * n);
  for (std::size_t i = 0; i < cost.train_ids.size(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost.entries[i * n + j] =
          cost.scale * (cost.delta_full[i * n + j] + cost.delta_full_mini[i]);
  return cost;
}

Marginals marginals(const Graph& graph) {
  if (graph.num_train() < 1 || graph.num_test() < 1)
    throw InputError("marginals need both splits nonempty");
  Marginals m;
  m.rho_train.assign(static_cast<std::size_t>(graph.num_train()),
                     1.0 / static_cast<double>(graph.num_train()));
  m.rho_test.assign(static_cast<std::size_t>(graph.num_test()),
                    1.0 / static_cast<double>(graph.num_test()));
  return m;
}

TransportPlan wasserstein(const CostMatrix& cost, const Marginals& marginals) {
  std::size_t m = cost.train_ids.size();
  std::size_t n = cost.test_ids.size();
  if (marginals.rho_train.size() != m || marginals.rho_test.size() != n)
    throw InputError("marginal sizes do not match the cost matrix");
  double mass_train = 0.0, mass_test = 0.0;
  for (double v : marginals.rho_train) {
    if (v < 0.0) throw InputError("marginals must be non-negative");
    mass_train += v;
  }
  for (double v : marginals.rho_test) {
    if (v < 0.0) throw InputError("marginals must be non-negative");
    mass_test += v;
  }
  if (std::abs(mass_train - mass_test) > 1e-9)
    throw InputError("marginal masses differ");

  double max_cost = 0.0;
  for (double c : cost.entries) max_cost = std::max(max_cost, std::abs(c));
  double tol = std::max(max_cost, 1.0) * 1e-13;

  TransportSimplex<double> solver;
  auto solution =
      solver.solve(cost.entries, marginals.rho_train, marginals.rho_test, tol);

  TransportPlan plan;
  plan.cost = solution.cost;
  plan.row_marginals = marginals.rho_train;
  plan.col_marginals = marginals.rho_test;
  plan.plan.reserve(solution.plan.size());
  for (const auto& cell : solution.plan)
    plan.plan.push_back({static_cast<std::size_t>(cell.row),
                         static_cast<std::size_t>(cell.col), cell.flow});
  return plan;
}

double generalization_bound(double train_loss, const std::vector<double>& weights,
                            double kappa, int h, NodeId n_train, double delta,
                            double c_u, double c_g) {
  if (!(c_u > 0.0)) throw InputError("C_u must be positive");
  if (!(c_g > 0.0 && c_g < 1.0)) throw InputError("C_G must lie in (0, 1)");
  if (!(kappa > 0.0)) throw InputError("kappa must be positive");
  if (h < 1 || n_train < 1) throw InputError("sizes must be positive");
  double w_sq = 0.0;
  for (double w : weights) w_sq += w * w;
  double d_kl = w_sq / (2.0 * static_cast<double>(h) * kappa * kappa);
  return train_loss +
         (d_kl + std::log(1.0 / c_g) +
          c_u * c_u / (4.0 * static_cast<double>(n_train)) + c_u * delta) /
             c_u;
}

}  // namespace gnnlab
