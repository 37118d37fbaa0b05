#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gnnlab/error.hpp"
#include "gnnlab/metrics.hpp"
#include "gnnlab/rng.hpp"

using namespace gnnlab;

namespace {

Trajectory from_losses(const std::vector<double>& losses) {
  Trajectory t;
  t.batch_loss = losses;
  t.full_loss = losses;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    t.elapsed_s.push_back(static_cast<double>(i + 1));
    t.nodes_processed.push_back(static_cast<std::int64_t>(i + 1) * 10);
  }
  return t;
}

Trajectory from_accuracies(const std::vector<double>& accs) {
  Trajectory t;
  std::size_t n = accs.size();
  t.batch_loss.assign(n, 1.0);
  t.full_loss.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    t.accuracy.push_back({static_cast<std::int64_t>(i) + 1, accs[i]});
    t.elapsed_s.push_back(static_cast<double>(i + 1));
    t.nodes_processed.push_back(static_cast<std::int64_t>(i + 1) * 10);
  }
  return t;
}

}  // namespace

TEST_CASE("population variance convention is pinned") {
  // Alternating 0.9 / 0.92: mean 0.91, population variance exactly 1e-4
  // (the sample variance over 100 points would be 100/99 * 1e-4).
  std::vector<double> window;
  for (int i = 0; i < 100; ++i) window.push_back(i % 2 == 0 ? 0.9 : 0.92);
  CHECK(population_variance(window.data(), 100) == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("constant trace derives its own value as target") {
  auto traj = from_losses(std::vector<double>(100, 0.3));
  auto target = derive_target_loss(traj);
  CHECK(target.value == doctest::Approx(0.3));
  CHECK(target.derived);
  CHECK(target.window == 100);
}

TEST_CASE("two-phase trace skips the noisy first window") {
  // 99 iterations at 1.0 then 100 at 0.3: every window touching the jump has
  // variance far above 5e-4, so the first qualifying window is pure 0.3.
  std::vector<double> losses(99, 1.0);
  losses.insert(losses.end(), 100, 0.3);
  auto target = derive_target_loss(from_losses(losses));
  CHECK(target.value == doctest::Approx(0.3));
}

TEST_CASE("white-noise trace is not derivable") {
  RngStream rng(7, RngDomain::generator);
  std::vector<double> losses;
  for (int i = 0; i < 400; ++i)
    losses.push_back(0.5 + 0.1 * std::sqrt(12.0) * (rng.next_double() - 0.5));
  // Uniform with variance 0.01 >> 5e-4.
  CHECK_THROWS_AS(derive_target_loss(from_losses(losses)), InputError);
}

TEST_CASE("short traces are rejected") {
  CHECK_THROWS_AS(derive_target_loss(from_losses(std::vector<double>(99, 0.1))),
                  InputError);
}

TEST_CASE("accuracy target takes the window minimum") {
  std::vector<double> accs;
  for (int i = 0; i < 100; ++i) accs.push_back(i % 2 == 0 ? 0.9 : 0.92);
  auto target = derive_target_accuracy(from_accuracies(accs));
  CHECK(target.value == doctest::Approx(0.9));
  CHECK(target.var_threshold == doctest::Approx(4e-4));
}

TEST_CASE("variance exactly at the threshold is rejected (strict less-than)") {
  // Alternating +-0.02 around 0.9: population variance exactly 4e-4.
  std::vector<double> accs;
  for (int i = 0; i < 100; ++i) accs.push_back(i % 2 == 0 ? 0.88 : 0.92);
  CHECK(population_variance(accs.data(), 100) == doctest::Approx(4e-4).epsilon(1e-12));
  CHECK_THROWS_AS(derive_target_accuracy(from_accuracies(accs)), InputError);
}

TEST_CASE("derivation ignores the trace after the first qualifying window") {
  std::vector<double> losses(100, 0.4);
  losses.insert(losses.end(), 50, 123.0);  // garbage afterwards
  auto target = derive_target_loss(from_losses(losses));
  CHECK(target.value == doctest::Approx(0.4));
}

TEST_CASE("iteration_to finds the first crossing") {
  auto traj = from_losses({1.0, 0.5, 0.2, 0.1});
  TargetSpec spec;
  spec.kind = TargetSpec::Kind::loss;
  spec.value = 0.2;
  auto it = iteration_to(traj, spec);
  REQUIRE(it.has_value());
  CHECK(*it == 3);

  spec.value = 0.01;  // below the minimum: never reached
  CHECK(!iteration_to(traj, spec).has_value());
}

TEST_CASE("sparse accuracy samples cross only at sampled iterations") {
  Trajectory t;
  t.batch_loss.assign(25, 1.0);
  t.full_loss.assign(25, std::numeric_limits<double>::quiet_NaN());
  t.accuracy = {{10, 0.6}, {20, 0.8}};
  for (int i = 0; i < 25; ++i) {
    t.elapsed_s.push_back(static_cast<double>(i + 1));
    t.nodes_processed.push_back((i + 1) * 4);
  }
  TargetSpec spec;
  spec.kind = TargetSpec::Kind::accuracy;
  spec.value = 0.75;
  auto it = iteration_to(t, spec);
  REQUIRE(it.has_value());
  CHECK(*it == 20);
  auto seconds = time_to(t, spec);
  REQUIRE(seconds.has_value());
  CHECK(*seconds == doctest::Approx(20.0));
}

TEST_CASE("target sensitivity is monotone") {
  RngStream rng(9, RngDomain::generator);
  std::vector<double> losses;
  double level = 2.0;
  for (int i = 0; i < 300; ++i) {
    level = std::max(0.01, level - 0.01 * rng.next_double());
    losses.push_back(level);
  }
  auto traj = from_losses(losses);
  TargetSpec tight, loose;
  tight.kind = loose.kind = TargetSpec::Kind::loss;
  tight.value = 0.9;
  loose.value = 1.4;
  auto t_tight = iteration_to(traj, tight);
  auto t_loose = iteration_to(traj, loose);
  if (t_tight && t_loose) CHECK(*t_tight >= *t_loose);
}

TEST_CASE("throughput is nodes over seconds") {
  // 10 iterations at b = 100, 5 seconds total.
  Trajectory t;
  t.batch_loss.assign(10, 1.0);
  t.full_loss.assign(10, 1.0);
  for (int i = 0; i < 10; ++i) {
    t.elapsed_s.push_back(0.5 * (i + 1));
    t.nodes_processed.push_back((i + 1) * 100LL);
  }
  CHECK(throughput(t) == doctest::Approx(200.0));

  // Full mode: n_train = 1000, 10 iterations, 10 seconds.
  Trajectory f;
  f.batch_loss.assign(10, 1.0);
  f.full_loss.assign(10, 1.0);
  for (int i = 0; i < 10; ++i) {
    f.elapsed_s.push_back(static_cast<double>(i + 1));
    f.nodes_processed.push_back((i + 1) * 1000LL);
  }
  CHECK(throughput(f) == doctest::Approx(1000.0));

  Trajectory zero = f;
  zero.elapsed_s.assign(10, 0.0);
  CHECK_THROWS_AS(throughput(zero), InputError);
}
