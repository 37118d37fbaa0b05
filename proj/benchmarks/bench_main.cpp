#include <benchmark/benchmark.h>

#include "gnnlab/distance.hpp"
#include "gnnlab/model.hpp"
#include "gnnlab/sampling.hpp"
#include "gnnlab/trainer.hpp"

namespace {

using namespace gnnlab;

Graph bench_graph() {
  static Graph g =
      split_train_test(generate_sbm({200, 200}, 0.05, 0.01, 16, 7), 0.5, 8);
  return g;
}

void BM_NormalizedRowsFull(benchmark::State& state) {
  auto g = bench_graph();
  auto train = g.train_nodes();
  for (auto _ : state) {
    auto rows = normalized_rows_full(g, train);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_NormalizedRowsFull);

void BM_SampleNeighbors(benchmark::State& state) {
  auto g = bench_graph();
  SamplerConfig cfg{64, static_cast<NodeId>(state.range(0)), 5, false,
                    MiniNormalization::sampled_in_degree};
  std::int64_t iter = 0;
  for (auto _ : state) {
    auto targets = sample_batch(g, cfg, iter);
    auto mb = sample_neighbors(g, targets, cfg.beta, cfg.seed, iter++);
    benchmark::DoNotOptimize(mb);
  }
}
BENCHMARK(BM_SampleNeighbors)->Arg(2)->Arg(8);

void BM_ForwardAndGrad(benchmark::State& state) {
  auto g = bench_graph();
  auto train = g.train_nodes();
  auto rows = normalized_rows_full(g, train);
  auto params = init_gaussian(2, 16, 0.2, 3);
  std::vector<int> labels;
  for (NodeId t : train) labels.push_back(g.label(t));
  for (auto _ : state) {
    auto grad = grad_mse(rows, g.features(), g.feature_dim(), params, labels);
    benchmark::DoNotOptimize(grad);
  }
}
BENCHMARK(BM_ForwardAndGrad);

void BM_TrainMiniIteration(benchmark::State& state) {
  auto g = bench_graph();
  auto params = init_gaussian(2, 16, 0.2, 3);
  TrainConfig cfg;
  cfg.loss = LossKind::mse;
  cfg.mode = TrainMode::mini;
  cfg.sampler = {32, 4, 11, false, MiniNormalization::sampled_in_degree};
  cfg.eta = LearningRate::fixed(0.01);
  cfg.max_iters = 16;
  cfg.eval_every = 16;
  for (auto _ : state) {
    auto traj = train(g, params, cfg);
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_TrainMiniIteration);

void BM_WassersteinSolve(benchmark::State& state) {
  auto g = split_train_test(
      generate_sbm({static_cast<NodeId>(state.range(0)),
                    static_cast<NodeId>(state.range(0))},
                   0.1, 0.02, 4, 5),
      0.5, 6);
  auto cost = build_cost(g, 2, g.num_train() / 2, 3,
                         {1.0, 2, 1, MiniNormalization::sampled_in_degree});
  auto m = marginals(g);
  for (auto _ : state) {
    auto plan = wasserstein(cost, m);
    benchmark::DoNotOptimize(plan);
  }
}
BENCHMARK(BM_WassersteinSolve)->Arg(20)->Arg(60);

}  // namespace

BENCHMARK_MAIN();
