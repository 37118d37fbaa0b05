// Command-line surface for the GNN training laboratory: dataset generation,
// single training runs, sweep orchestration, the structural-distance
// diagnostic, the distributed cost model, and CSV/SVG reporting.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gnnlab/csv.hpp"
#include "gnnlab/distance.hpp"
#include "gnnlab/error.hpp"
#include "gnnlab/graph.hpp"
#include "gnnlab/metrics.hpp"
#include "gnnlab/simulator.hpp"
#include "gnnlab/svg.hpp"
#include "gnnlab/sweep.hpp"
#include "gnnlab/trainer.hpp"
#include "gnnlab/version.hpp"

namespace fs = std::filesystem;
using namespace gnnlab;

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("GNNLAB_SEED");
  if (!raw || !*raw) return std::nullopt;
  return std::strtoull(raw, nullptr, 10);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LossKind parse_loss(const std::string& name) {
  if (name == "mse") return LossKind::mse;
  if (name == "ce") return LossKind::ce;
  throw InputError("unknown loss '" + name + "' (expected mse or ce)");
}

MiniNormalization parse_normalization(const std::string& name) {
  if (name == "sampled") return MiniNormalization::sampled_in_degree;
  if (name == "full") return MiniNormalization::full_degree;
  throw InputError("unknown normalization '" + name +
                   "' (expected sampled or full)");
}

int cmd_generate(const std::string& type, const std::vector<NodeId>& blocks,
                 double intra, double inter, NodeId n, NodeId d, double p,
                 int features, std::uint64_t seed, double train_fraction,
                 const std::string& out) {
  if (auto s = env_seed()) seed = *s;
  Graph graph = [&] {
    if (type == "sbm") return generate_sbm(blocks, intra, inter, features, seed);
    if (type == "regular") return generate_random_regular(n, d, features, seed);
    if (type == "er") return generate_er(n, p, features, seed);
    throw InputError("unknown generator '" + type +
                     "' (expected sbm, regular or er)");
  }();
  if (train_fraction > 0.0)
    graph = split_train_test(graph, train_fraction, seed + 1);
  save_graph(graph, out);
  std::cout << "wrote " << out << " (nodes " << graph.num_nodes() << ", edges "
            << graph.num_edges() << ", train " << graph.num_train() << ", test "
            << graph.num_test() << ", d_max " << graph.max_degree() << ")\n";
  return 0;
}

int cmd_train(const std::string& graph_path, const std::string& loss_name,
              const std::string& mode_name, NodeId b, NodeId beta,
              const std::string& eta_text, std::int64_t iters,
              std::int64_t eval_every, std::uint64_t seed, int h, double kappa,
              double scale, double c4, double c6, double target_loss,
              const std::string& normalization, const std::string& out) {
  if (auto s = env_seed()) seed = *s;
  Graph graph = load_graph(graph_path);

  TrainConfig config;
  config.loss = parse_loss(loss_name);
  if (mode_name == "full") {
    config.mode = TrainMode::full;
  } else if (mode_name == "mini") {
    config.mode = TrainMode::mini;
    config.sampler.b = b > 0 ? b : graph.num_train();
    config.sampler.beta = beta > 0 ? beta : graph.max_degree();
    config.sampler.seed = seed;
    config.sampler.normalization = parse_normalization(normalization);
  } else {
    throw InputError("unknown mode '" + mode_name + "' (expected full or mini)");
  }
  config.eta = eta_text == "theoretical"
                   ? LearningRate::from_theory()
                   : LearningRate::fixed(std::strtod(eta_text.c_str(), nullptr));
  config.max_iters = iters;
  config.eval_every = eval_every;
  config.c4 = c4;
  config.c6 = c6;
  if (target_loss > 0.0) config.target_loss = target_loss;

  if (config.loss == LossKind::mse) h = graph.num_classes();
  ModelParams params = init_gaussian(h, graph.feature_dim(), kappa, seed);
  params.activation_scale = scale;
  if (config.loss == LossKind::ce) params.v = balanced_sign_vector(h);

  Trajectory traj = train(graph, params, config);
  if (!out.empty()) write_file(out, traj.to_csv());
  double final_loss = traj.full_loss.back();
  std::cout << "iterations " << traj.iterations() << " eta " << traj.eta_used
            << " final_full_loss " << csv_double(final_loss) << " final_test_acc "
            << (traj.accuracy.empty() ? std::string("-")
                                      : csv_double(traj.accuracy.back().value))
            << "\n";
  return 0;
}

// A sweep [dataset] section may name a graph file or an inline generator
// spec; the latter writes <out>/graph.txt so the manifest replays against
// a concrete, hash-checked file.
Config resolve_dataset(Config config, const std::string& out_dir) {
  if (!config.has("dataset", "type")) return config;
  const std::vector<std::string> allowed = {
      "type", "seed",  "features", "blocks",        "intra",
      "inter", "n",    "d",        "p",             "train_fraction"};
  for (const auto& [k, v] : config.items("dataset"))
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw InputError("unknown config key [dataset] " + k);
  std::string type = config.get("dataset", "type");
  auto seed =
      static_cast<std::uint64_t>(config.get_int_or("dataset", "seed", 1));
  if (auto s = env_seed()) seed = *s;
  int features = static_cast<int>(config.get_int_or("dataset", "features", 8));
  Graph graph = [&] {
    if (type == "sbm") {
      std::vector<NodeId> blocks;
      for (auto v : config.get_int_list("dataset", "blocks"))
        blocks.push_back(static_cast<NodeId>(v));
      return generate_sbm(blocks, config.get_double("dataset", "intra"),
                          config.get_double("dataset", "inter"), features, seed);
    }
    if (type == "regular")
      return generate_random_regular(
          static_cast<NodeId>(config.get_int("dataset", "n")),
          static_cast<NodeId>(config.get_int("dataset", "d")), features, seed);
    if (type == "er")
      return generate_er(static_cast<NodeId>(config.get_int("dataset", "n")),
                         config.get_double("dataset", "p"), features, seed);
    throw InputError("unknown generator '" + type +
                     "' (expected sbm, regular or er)");
  }();
  double fraction = config.get_double_or("dataset", "train_fraction", 0.5);
  if (fraction > 0.0) graph = split_train_test(graph, fraction, seed + 1);

  auto path = (fs::path(out_dir) / "graph.txt").string();
  save_graph(graph, path);

  Config resolved;
  for (const auto& section : config.section_order()) {
    if (section == "dataset") continue;
    for (const auto& [k, v] : config.items(section)) resolved.set(section, k, v);
  }
  resolved.set("dataset", "path", path);
  return resolved;
}

int cmd_sweep(const std::string& config_path, const std::string& manifest_path,
              const std::string& out_dir, int jobs) {
  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "runs");
  SweepSpec spec =
      manifest_path.empty()
          ? parse_sweep_spec(resolve_dataset(Config::load(config_path), out_dir),
                             env_seed())
          : spec_from_manifest(Config::load(manifest_path), env_seed());

  std::vector<std::string> trajectories;
  SweepResult result = run_sweep(spec, jobs, &trajectories);
  for (const auto& warning : result.warnings)
    std::cerr << "warning: " << warning << "\n";

  write_file((fs::path(out_dir) / "metrics.csv").string(), result.metrics_csv);
  write_file((fs::path(out_dir) / "manifest.txt").string(),
             result.manifest_text);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (trajectories[i].empty()) continue;
    char name[32];
    std::snprintf(name, sizeof(name), "run_%04zu.csv", i);
    write_file((fs::path(out_dir) / "runs" / name).string(), trajectories[i]);
  }
  if (result.loss_target)
    std::cout << "target_loss " << csv_double(result.loss_target->value)
              << (result.loss_target->derived ? " (derived)" : "") << "\n";
  if (result.accuracy_target)
    std::cout << "target_accuracy "
              << csv_double(result.accuracy_target->value)
              << (result.accuracy_target->derived ? " (derived)" : "") << "\n";
  std::cout << "wrote " << out_dir << "/metrics.csv (" << result.runs.size()
            << " runs)\n";
  return 0;
}

int cmd_distance(const std::string& graph_path, std::vector<NodeId> betas,
                 std::vector<NodeId> bs, std::vector<std::uint64_t> seeds,
                 int h, double c_delta, int draws, double kappa, double c_u,
                 double c_g, double train_loss, double w_frob,
                 const std::string& normalization, const std::string& out) {
  if (auto s = env_seed()) seeds = {*s};
  Graph graph = load_graph(graph_path);
  auto m = marginals(graph);

  CostOptions options;
  options.c_delta = c_delta;
  options.h = h;
  options.draws = draws;
  options.normalization = parse_normalization(normalization);

  CsvTable table;
  table.header = {"beta", "b", "seed", "delta_wasserstein",
                  "sum_delta_full_mini", "pac_bayes_bound"};
  for (NodeId beta : betas)
    for (NodeId b : bs)
      for (std::uint64_t seed : seeds) {
        auto cost = build_cost(graph, beta, b, seed, options);
        auto plan = wasserstein(cost, m);
        double sum_dfm = 0.0;
        for (double v : cost.delta_full_mini) sum_dfm += v;
        // The KL term uses the Frobenius bound ||W||_F^2 / (2 h kappa^2);
        // the weight norm is passed in rather than retrained here.
        std::vector<double> w_proxy{w_frob};
        double bound = generalization_bound(train_loss, w_proxy, kappa, h,
                                            graph.num_train(), plan.cost, c_u,
                                            c_g);
        table.rows.push_back({std::to_string(beta), std::to_string(b),
                              std::to_string(seed), csv_double(plan.cost),
                              csv_double(sum_dfm), csv_double(bound)});
      }

  if (out.empty())
    std::cout << table.serialize();
  else
    write_file(out, table.serialize());
  return 0;
}

int cmd_simulate(double b, double beta, double iters, double compute,
                 double bandwidth, const std::string& mode_name,
                 const std::string& out) {
  TrainMode mode;
  if (mode_name == "full")
    mode = TrainMode::full;
  else if (mode_name == "mini")
    mode = TrainMode::mini;
  else
    throw InputError("unknown mode '" + mode_name + "' (expected full or mini)");

  auto cost = estimate({b, beta, iters}, {compute, bandwidth}, mode);
  CsvTable table;
  table.header = {"mode", "b", "beta", "n", "C", "H", "t_cal", "t_comm",
                  "total_s"};
  table.rows.push_back({mode_name, csv_double(b), csv_double(beta),
                        csv_double(iters), csv_double(compute),
                        csv_double(bandwidth), csv_double(cost.t_cal),
                        csv_double(cost.t_comm), csv_double(cost.total_s)});
  if (out.empty())
    std::cout << table.serialize();
  else
    write_file(out, table.serialize());
  return 0;
}

struct GroupStats {
  NodeId b = 0;
  NodeId beta = 0;
  std::vector<double> itr2loss;
  std::vector<double> itr2acc;
  std::vector<double> time2acc;
  std::vector<double> throughput;
  int runs = 0;
};

std::optional<double> median_of(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int cmd_report(const std::string& metrics_path, const std::string& out_dir) {
  auto table = parse_csv(read_file(metrics_path));
  int col_b = table.column("b");
  int col_beta = table.column("beta");
  int col_itl = table.column("itr2loss");
  int col_ita = table.column("itr2acc");
  int col_tta = table.column("time2acc_s");
  int col_thr = table.column("throughput");
  if (col_b < 0 || col_beta < 0 || col_itl < 0)
    throw InputError("metrics csv is missing required columns");

  std::map<std::pair<NodeId, NodeId>, GroupStats> groups;
  for (const auto& row : table.rows) {
    auto b = static_cast<NodeId>(std::strtol(row[col_b].c_str(), nullptr, 10));
    auto beta =
        static_cast<NodeId>(std::strtol(row[col_beta].c_str(), nullptr, 10));
    auto& g = groups[{b, beta}];
    g.b = b;
    g.beta = beta;
    ++g.runs;
    auto push = [&](int col, std::vector<double>& into) {
      if (col >= 0 && !row[col].empty())
        into.push_back(std::strtod(row[col].c_str(), nullptr));
    };
    push(col_itl, g.itr2loss);
    push(col_ita, g.itr2acc);
    push(col_tta, g.time2acc);
    push(col_thr, g.throughput);
  }

  fs::create_directories(out_dir);
  CsvTable summary;
  summary.header = {"b",       "beta",        "runs",
                    "itr2loss", "itr2acc",    "time2acc_s",
                    "throughput"};
  auto cell = [](const std::optional<double>& v) {
    return v ? csv_double(*v) : std::string();
  };
  for (const auto& [key, g] : groups)
    summary.rows.push_back({std::to_string(g.b), std::to_string(g.beta),
                            std::to_string(g.runs), cell(median_of(g.itr2loss)),
                            cell(median_of(g.itr2acc)),
                            cell(median_of(g.time2acc)),
                            cell(median_of(g.throughput))});
  write_file((fs::path(out_dir) / "summary.csv").string(), summary.serialize());
  std::cout << summary.serialize();

  // Median iteration-to-loss against b (one series per beta) and against
  // beta (one series per b).
  LineChart by_b;
  by_b.title = "iteration-to-loss vs batch size";
  by_b.x_label = "b";
  by_b.y_label = "iterations";
  std::map<NodeId, std::vector<std::pair<double, double>>> series_by_beta;
  std::map<NodeId, std::vector<std::pair<double, double>>> series_by_b;
  for (const auto& [key, g] : groups) {
    auto med = median_of(g.itr2loss);
    if (!med) continue;
    series_by_beta[g.beta].push_back({static_cast<double>(g.b), *med});
    series_by_b[g.b].push_back({static_cast<double>(g.beta), *med});
  }
  for (auto& [beta, points] : series_by_beta) {
    std::sort(points.begin(), points.end());
    by_b.series.push_back({"beta=" + std::to_string(beta), points});
  }
  write_file((fs::path(out_dir) / "itr2loss_vs_b.svg").string(), by_b.render());

  LineChart by_beta;
  by_beta.title = "iteration-to-loss vs fan-out size";
  by_beta.x_label = "beta";
  by_beta.y_label = "iterations";
  for (auto& [b, points] : series_by_b) {
    std::sort(points.begin(), points.end());
    by_beta.series.push_back({"b=" + std::to_string(b), points});
  }
  write_file((fs::path(out_dir) / "itr2loss_vs_beta.svg").string(),
             by_beta.render());
  std::cout << "wrote " << out_dir << "/summary.csv and SVG charts\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-graph vs mini-batch GNN training laboratory"};
  app.set_version_flag("--version", gnnlab::kVersion);
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a synthetic graph file");
  std::string gen_type = "sbm", gen_out = "graph.txt";
  std::vector<NodeId> gen_blocks{50, 50};
  double gen_intra = 0.3, gen_inter = 0.02, gen_p = 0.1;
  NodeId gen_n = 100, gen_d = 4;
  int gen_features = 8;
  std::uint64_t gen_seed = 1;
  double gen_fraction = 0.5;
  gen->add_option("--type", gen_type, "sbm, regular or er");
  gen->add_option("--blocks", gen_blocks, "sbm block sizes");
  gen->add_option("--intra", gen_intra, "sbm intra-block edge probability");
  gen->add_option("--inter", gen_inter, "sbm inter-block edge probability");
  gen->add_option("--n", gen_n, "node count (regular, er)");
  gen->add_option("--d", gen_d, "degree (regular)");
  gen->add_option("--p", gen_p, "edge probability (er)");
  gen->add_option("--features", gen_features, "feature dimension");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--train-fraction", gen_fraction,
                  "train split fraction, 0 keeps all nodes in train");
  gen->add_option("--out", gen_out, "output graph file");

  // train
  auto* tr = app.add_subcommand("train", "Train one model and dump a trajectory");
  std::string tr_graph, tr_loss = "mse", tr_mode = "full", tr_eta = "theoretical";
  std::string tr_out, tr_norm = "sampled";
  NodeId tr_b = 0, tr_beta = 0;
  std::int64_t tr_iters = 1000, tr_eval = 10;
  std::uint64_t tr_seed = 1;
  int tr_h = 2;
  double tr_kappa = 0.1, tr_scale = 1.0, tr_c4 = 1.0, tr_c6 = 0.1;
  double tr_target = 0.0;
  tr->add_option("--graph", tr_graph, "graph file")->required();
  tr->add_option("--loss", tr_loss, "mse or ce");
  tr->add_option("--mode", tr_mode, "full or mini");
  tr->add_option("--b", tr_b, "batch size (mini; 0 = n_train)");
  tr->add_option("--beta", tr_beta, "fan-out size (mini; 0 = d_max)");
  tr->add_option("--eta", tr_eta, "learning rate or 'theoretical'");
  tr->add_option("--iters", tr_iters, "max iterations");
  tr->add_option("--eval-every", tr_eval, "accuracy/full-loss period");
  tr->add_option("--seed", tr_seed, "init and sampler seed");
  tr->add_option("--hidden", tr_h, "hidden dim (ce; mse uses the class count)");
  tr->add_option("--kappa", tr_kappa, "init standard deviation");
  tr->add_option("--scale", tr_scale, "activation scale (1 or sqrt(2))");
  tr->add_option("--c4", tr_c4, "CE step-size constant");
  tr->add_option("--c6", tr_c6, "MSE interval constant");
  tr->add_option("--target-loss", tr_target, "stop at this full-graph loss");
  tr->add_option("--normalization", tr_norm,
                 "mini row normalization: sampled or full");
  tr->add_option("--out", tr_out, "trajectory csv path");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run a (b, beta, eta, seed) grid");
  std::string sw_config, sw_manifest, sw_out = "sweep_out";
  int sw_jobs = 1;
  sw->add_option("--config", sw_config, "sweep config file");
  sw->add_option("--manifest", sw_manifest, "replay a sweep manifest");
  sw->add_option("--out", sw_out, "output directory");
  sw->add_option("--jobs", sw_jobs, "concurrent runs");

  // distance
  auto* di = app.add_subcommand("distance",
                                "Wasserstein structural distance and bound");
  std::string di_graph, di_out, di_norm = "sampled";
  std::vector<NodeId> di_betas{1}, di_bs{1};
  std::vector<std::uint64_t> di_seeds{1};
  int di_h = 2, di_draws = 1;
  double di_cdelta = 1.0, di_kappa = 0.1, di_cu = 1.0, di_cg = 0.05;
  double di_train_loss = 0.0, di_wfrob = 0.0;
  di->add_option("--graph", di_graph, "graph file")->required();
  di->add_option("--beta", di_betas, "fan-out sizes");
  di->add_option("--b", di_bs, "batch sizes");
  di->add_option("--seed", di_seeds, "sampling seeds");
  di->add_option("--hidden", di_h, "hidden dimension in the cost scale");
  di->add_option("--c-delta", di_cdelta, "cost scale constant");
  di->add_option("--draws", di_draws, "virtual-sampling draws to average");
  di->add_option("--kappa", di_kappa, "init scale for the KL bound");
  di->add_option("--c-u", di_cu, "discrepancy constant");
  di->add_option("--c-g", di_cg, "confidence constant in (0,1)");
  di->add_option("--train-loss", di_train_loss, "trained loss for the bound");
  di->add_option("--w-frob", di_wfrob, "Frobenius norm of trained weights");
  di->add_option("--normalization", di_norm, "sampled or full");
  di->add_option("--out", di_out, "csv path (default stdout)");

  // simulate
  auto* si = app.add_subcommand("simulate", "Closed-form distributed time model");
  double si_b = 10, si_beta = 10, si_iters = 10000, si_c = 1.0, si_h = 1000.0;
  std::string si_mode = "mini", si_out;
  si->add_option("--b", si_b, "batch size")->required();
  si->add_option("--beta", si_beta, "fan-out size")->required();
  si->add_option("--iters", si_iters, "iterations to target")->required();
  si->add_option("--compute", si_c, "compute capacity C (nodes/s)")->required();
  si->add_option("--bandwidth", si_h, "bandwidth H (nodes/s)")->required();
  si->add_option("--mode", si_mode, "full or mini");
  si->add_option("--out", si_out, "csv path (default stdout)");

  // report
  auto* re = app.add_subcommand("report", "Summarize a metrics csv into SVG");
  std::string re_metrics, re_out = "report_out";
  re->add_option("--metrics", re_metrics, "metrics csv from sweep")->required();
  re->add_option("--out-dir", re_out, "report output directory");

  try {
    app.parse(argc, argv);
    if (gen->parsed())
      return cmd_generate(gen_type, gen_blocks, gen_intra, gen_inter, gen_n,
                          gen_d, gen_p, gen_features, gen_seed, gen_fraction,
                          gen_out);
    if (tr->parsed())
      return cmd_train(tr_graph, tr_loss, tr_mode, tr_b, tr_beta, tr_eta,
                       tr_iters, tr_eval, tr_seed, tr_h, tr_kappa, tr_scale,
                       tr_c4, tr_c6, tr_target, tr_norm, tr_out);
    if (sw->parsed()) {
      if (sw_config.empty() == sw_manifest.empty())
        throw InputError("sweep needs exactly one of --config or --manifest");
      return cmd_sweep(sw_config, sw_manifest, sw_out, sw_jobs);
    }
    if (di->parsed())
      return cmd_distance(di_graph, di_betas, di_bs, di_seeds, di_h, di_cdelta,
                          di_draws, di_kappa, di_cu, di_cg, di_train_loss,
                          di_wfrob, di_norm, di_out);
    if (si->parsed())
      return cmd_simulate(si_b, si_beta, si_iters, si_c, si_h, si_mode, si_out);
    if (re->parsed()) return cmd_report(re_metrics, re_out);
    return 0;
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << gnnlab::kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DivergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
