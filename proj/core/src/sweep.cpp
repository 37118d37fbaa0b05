#include "gnnlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "gnnlab/csv.hpp"
#include "gnnlab/error.hpp"
#include "gnnlab/sha256.hpp"
#include "gnnlab/version.hpp"

namespace gnnlab {

namespace {

std::string loss_name(LossKind loss) {
  return loss == LossKind::mse ? "mse" : "ce";
}

LossKind loss_from_name(const std::string& name) {
  if (name == "mse") return LossKind::mse;
  if (name == "ce") return LossKind::ce;
  throw InputError("unknown loss '" + name + "' (expected mse or ce)");
}

struct RunOutcome {
  Trajectory trajectory;
  bool diverged = false;
  std::int64_t diverged_at = 0;
  double eta = 0.0;
};

RunOutcome execute_run(const Graph& graph, const SweepSpec& spec,
                       const RunPoint& run) {
  // MSE ties the hidden dimension to the class count; [model] h only
  // applies to the CE head.
  int h = spec.loss == LossKind::mse ? graph.num_classes() : spec.h;
  ModelParams params = init_gaussian(h, graph.feature_dim(), spec.kappa,
                                     run.seed);
  params.activation_scale = spec.activation_scale;
  if (spec.loss == LossKind::ce) params.v = balanced_sign_vector(h);

  TrainConfig config;
  config.loss = spec.loss;
  config.mode = TrainMode::mini;
  config.sampler.b = run.b;
  config.sampler.beta = run.beta;
  config.sampler.seed = run.seed;
  config.eta = run.eta_theoretical ? LearningRate::from_theory()
                                   : LearningRate::fixed(run.eta);
  config.max_iters = spec.max_iters;
  config.eval_every = spec.eval_every;
  config.c4 = spec.c4;
  config.c6 = spec.c6;

  RunOutcome outcome;
  try {
    outcome.trajectory = train(graph, params, config);
    outcome.eta = outcome.trajectory.eta_used;
  } catch (const DivergedError& e) {
    outcome.diverged = true;
    outcome.diverged_at = e.iteration();
  }
  return outcome;
}

// Replaces the wall clock with the closed-form per-iteration cost so time
// metrics replay byte-identically.
void apply_model_clock(Trajectory& traj, const HardwareProfile& profile) {
  TrainingShape shape{static_cast<double>(traj.b),
                      static_cast<double>(traj.beta), 1.0};
  double per_iter = estimate(shape, profile, TrainMode::mini).total_s;
  for (std::size_t i = 0; i < traj.elapsed_s.size(); ++i)
    traj.elapsed_s[i] = per_iter * static_cast<double>(i + 1);
}

std::string format_int_list(const std::vector<std::int64_t>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out << values[i] << (i + 1 < values.size() ? " " : "");
  return out.str();
}

}  // namespace

std::vector<RunPoint> enumerate_runs(const SweepSpec& spec) {
  if (spec.b_values.empty() || spec.beta_values.empty() || spec.seeds.empty())
    throw InputError("sweep grid axes must be nonempty");
  std::vector<double> etas =
      spec.eta_theoretical ? std::vector<double>{0.0} : spec.eta_values;
  if (etas.empty()) throw InputError("sweep needs eta values or theoretical eta");

  std::vector<RunPoint> runs;
  int id = 0;
  for (NodeId b : spec.b_values)
    for (NodeId beta : spec.beta_values)
      for (double eta : etas)
        for (std::uint64_t seed : spec.seeds) {
          RunPoint run;
          run.run_id = id++;
          run.b = b;
          run.beta = beta;
          run.eta_theoretical = spec.eta_theoretical;
          run.eta = eta;
          run.seed = seed;
          runs.push_back(run);
        }
  return runs;
}

SweepResult run_sweep(const SweepSpec& spec, int jobs,
                      std::vector<std::string>* trajectory_csvs) {
  if (jobs < 1) throw InputError("jobs must be at least 1");
  Graph graph = load_graph(spec.graph_path);

  SweepResult result;
  result.runs = enumerate_runs(spec);
  std::vector<RunOutcome> outcomes(result.runs.size());

  // Independent runs; any assignment of runs to threads produces the same
  // outputs because results land in run-id slots. Exceptions are carried out
  // of the workers and rethrown after the join.
  std::atomic<std::size_t> next{0};
  std::vector<std::string> run_errors(result.runs.size());
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= result.runs.size()) break;
      try {
        outcomes[i] = execute_run(graph, spec, result.runs[i]);
      } catch (const std::exception& e) {
        run_errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  int thread_count = std::min<int>(jobs, static_cast<int>(result.runs.size()));
  pool.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < run_errors.size(); ++i)
    if (!run_errors[i].empty())
      throw InputError("run " + std::to_string(result.runs[i].run_id) + ": " +
                       run_errors[i]);

  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    if (outcomes[i].diverged) {
      result.warnings.push_back(
          "run " + std::to_string(result.runs[i].run_id) + " diverged at iteration " +
          std::to_string(outcomes[i].diverged_at));
    } else {
      apply_model_clock(outcomes[i].trajectory, spec.clock_profile);
      result.runs[i].eta = outcomes[i].eta;
    }
  }

  // Reference run: smallest b, ties to smallest beta, then grid order.
  std::size_t ref = result.runs.size();
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    if (outcomes[i].diverged) continue;
    if (ref == result.runs.size() ||
        result.runs[i].b < result.runs[ref].b ||
        (result.runs[i].b == result.runs[ref].b &&
         result.runs[i].beta < result.runs[ref].beta))
      ref = i;
  }

  if (spec.explicit_target_loss) {
    TargetSpec t;
    t.kind = TargetSpec::Kind::loss;
    t.value = *spec.explicit_target_loss;
    result.loss_target = t;
  } else if (ref < result.runs.size()) {
    try {
      result.loss_target = derive_target_loss(outcomes[ref].trajectory);
    } catch (const InputError& e) {
      result.warnings.push_back(std::string("loss target not derivable: ") +
                                e.what());
    }
  }
  if (spec.explicit_target_accuracy) {
    TargetSpec t;
    t.kind = TargetSpec::Kind::accuracy;
    t.value = *spec.explicit_target_accuracy;
    result.accuracy_target = t;
  } else if (spec.want_accuracy_target && ref < result.runs.size()) {
    try {
      result.accuracy_target = derive_target_accuracy(outcomes[ref].trajectory);
    } catch (const InputError& e) {
      result.warnings.push_back(std::string("accuracy target not derivable: ") +
                                e.what());
    }
  }

  CsvTable table;
  table.header = {"run_id", "b",       "beta",      "eta",       "seed",
                  "itr2loss", "itr2acc", "time2acc_s", "throughput"};
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const auto& run = result.runs[i];
    std::vector<std::string> row(9);
    row[0] = std::to_string(run.run_id);
    row[1] = std::to_string(run.b);
    row[2] = std::to_string(run.beta);
    row[3] = outcomes[i].diverged && run.eta_theoretical
                 ? "theoretical"
                 : csv_double(run.eta);
    row[4] = std::to_string(run.seed);
    if (!outcomes[i].diverged) {
      auto report = compute_metrics(outcomes[i].trajectory, result.loss_target,
                                    result.accuracy_target);
      if (report.iteration_to_loss)
        row[5] = std::to_string(*report.iteration_to_loss);
      if (report.iteration_to_accuracy)
        row[6] = std::to_string(*report.iteration_to_accuracy);
      if (report.time_to_accuracy_s)
        row[7] = csv_double(*report.time_to_accuracy_s);
      row[8] = csv_double(report.throughput);
    }
    table.rows.push_back(std::move(row));
  }
  result.metrics_csv = table.serialize();
  result.manifest_text = manifest_config(spec).serialize();

  if (trajectory_csvs) {
    trajectory_csvs->clear();
    for (auto& outcome : outcomes)
      trajectory_csvs->push_back(outcome.diverged ? std::string()
                                                  : outcome.trajectory.to_csv());
  }
  return result;
}

SweepSpec parse_sweep_spec(const Config& config,
                           const std::optional<std::uint64_t>& env_seed) {
  config.validate_keys({
      {"dataset", {"path"}},
      {"model", {"h", "kappa", "activation_scale"}},
      {"train", {"loss", "max_iters", "eval_every", "c4", "c6", "eta"}},
      {"sweep", {"b", "beta", "seeds"}},
      {"metrics",
       {"target_loss", "target_accuracy", "clock_compute", "clock_bandwidth"}},
  });

  SweepSpec spec;
  spec.graph_path = config.get("dataset", "path");
  spec.loss = loss_from_name(config.get_or("train", "loss", "mse"));
  spec.h = static_cast<int>(config.get_int_or("model", "h", 2));
  spec.kappa = config.get_double_or("model", "kappa", 0.1);
  spec.activation_scale =
      config.get_double_or("model", "activation_scale", 1.0);
  spec.max_iters = config.get_int_or("train", "max_iters", 1000);
  spec.eval_every = config.get_int_or("train", "eval_every", 10);
  spec.c4 = config.get_double_or("train", "c4", 1.0);
  spec.c6 = config.get_double_or("train", "c6", 0.1);

  for (auto v : config.get_int_list("sweep", "b"))
    spec.b_values.push_back(static_cast<NodeId>(v));
  for (auto v : config.get_int_list("sweep", "beta"))
    spec.beta_values.push_back(static_cast<NodeId>(v));

  std::string eta = config.get_or("train", "eta", "theoretical");
  if (eta == "theoretical") {
    spec.eta_theoretical = true;
  } else {
    for (double v : config.get_double_list("train", "eta"))
      spec.eta_values.push_back(v);
  }

  if (env_seed) {
    spec.seeds = {*env_seed};
  } else {
    for (auto v : config.get_int_list("sweep", "seeds"))
      spec.seeds.push_back(static_cast<std::uint64_t>(v));
  }

  std::string target = config.get_or("metrics", "target_loss", "derive");
  if (target != "derive") {
    spec.explicit_target_loss = config.get_double("metrics", "target_loss");
  }
  std::string acc_target = config.get_or("metrics", "target_accuracy", "derive");
  if (acc_target == "none")
    spec.want_accuracy_target = false;
  else if (acc_target != "derive")
    spec.explicit_target_accuracy =
        config.get_double("metrics", "target_accuracy");

  spec.clock_profile.compute_c =
      config.get_double_or("metrics", "clock_compute", 1e6);
  spec.clock_profile.bandwidth_h =
      config.get_double_or("metrics", "clock_bandwidth", 1e6);

  spec.graph_sha256 = sha256_file(spec.graph_path);
  return spec;
}

Config manifest_config(const SweepSpec& spec) {
  Config m;
  m.set("manifest", "tool", "gnnlab");
  m.set("manifest", "version", kVersion);
  m.set("manifest", "format", "1");
  m.set("dataset", "path", spec.graph_path);
  m.set("dataset", "sha256", spec.graph_sha256);
  m.set("model", "h", std::to_string(spec.h));
  m.set("model", "kappa", csv_double(spec.kappa));
  m.set("model", "activation_scale", csv_double(spec.activation_scale));
  m.set("train", "loss", loss_name(spec.loss));
  m.set("train", "max_iters", std::to_string(spec.max_iters));
  m.set("train", "eval_every", std::to_string(spec.eval_every));
  m.set("train", "c4", csv_double(spec.c4));
  m.set("train", "c6", csv_double(spec.c6));
  if (spec.eta_theoretical) {
    m.set("train", "eta", "theoretical");
  } else {
    std::ostringstream etas;
    for (std::size_t i = 0; i < spec.eta_values.size(); ++i)
      etas << csv_double(spec.eta_values[i])
           << (i + 1 < spec.eta_values.size() ? " " : "");
    m.set("train", "eta", etas.str());
  }
  m.set("sweep", "b",
        format_int_list({spec.b_values.begin(), spec.b_values.end()}));
  m.set("sweep", "beta",
        format_int_list({spec.beta_values.begin(), spec.beta_values.end()}));
  std::vector<std::int64_t> seeds;
  for (auto s : spec.seeds) seeds.push_back(static_cast<std::int64_t>(s));
  m.set("sweep", "seeds", format_int_list(seeds));
  m.set("metrics", "target_loss",
        spec.explicit_target_loss ? csv_double(*spec.explicit_target_loss)
                                  : std::string("derive"));
  m.set("metrics", "target_accuracy",
        spec.explicit_target_accuracy
            ? csv_double(*spec.explicit_target_accuracy)
            : (spec.want_accuracy_target ? std::string("derive")
                                         : std::string("none")));
  m.set("metrics", "clock_compute", csv_double(spec.clock_profile.compute_c));
  m.set("metrics", "clock_bandwidth",
        csv_double(spec.clock_profile.bandwidth_h));
  return m;
}

SweepSpec spec_from_manifest(const Config& manifest,
                             const std::optional<std::uint64_t>& env_seed) {
  Config as_spec;
  for (const auto& section : manifest.section_order()) {
    if (section == "manifest") continue;
    for (const auto& [k, v] : manifest.items(section)) {
      if (section == "dataset" && k == "sha256") continue;
      as_spec.set(section, k, v);
    }
  }
  SweepSpec spec = parse_sweep_spec(as_spec, env_seed);
  if (manifest.has("dataset", "sha256") &&
      manifest.get("dataset", "sha256") != spec.graph_sha256)
    throw InputError("graph file hash does not match the manifest");
  return spec;
}

}  // namespace gnnlab
