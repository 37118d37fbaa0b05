#include "gnnlab/simulator.hpp"

#include <cmath>

#include "gnnlab/error.hpp"

namespace gnnlab {

CostEstimate estimate(const TrainingShape& shape, const HardwareProfile& profile,
                      TrainMode mode) {
  if (!(shape.b > 0.0) || !(shape.beta > 0.0) || !(shape.n_iters > 0.0))
    throw InputError("cost model needs positive b, beta and iteration count");
  if (!(profile.compute_c > 0.0) || !(profile.bandwidth_h > 0.0) ||
      !std::isfinite(profile.compute_c) || !std::isfinite(profile.bandwidth_h))
    throw InputError("hardware profile must be positive and finite");

  double aggregated = shape.b * shape.beta + shape.b;
  CostEstimate out;
  out.mode = mode;
  out.t_cal = aggregated / profile.compute_c;
  out.t_comm = (mode == TrainMode::mini ? shape.b : aggregated) /
               profile.bandwidth_h;
  out.total_s = shape.n_iters * (out.t_cal + out.t_comm);
  return out;
}

std::optional<double> crossover_bandwidth(const TrainingShape& full_cfg,
                                          const TrainingShape& mini_cfg,
                                          double compute_c) {
  if (!(compute_c > 0.0)) throw InputError("compute capacity must be positive");
  // total_full(H) - total_mini(H) = p + q / H with
  //   p = (n_f a_f - n_m a_m) / C, q = n_f a_f - n_m b_m,
  // where a = b*beta + b is the aggregated node count per iteration.
  double a_f = full_cfg.b * full_cfg.beta + full_cfg.b;
  double a_m = mini_cfg.b * mini_cfg.beta + mini_cfg.b;
  double p = (full_cfg.n_iters * a_f - mini_cfg.n_iters * a_m) / compute_c;
  double q = full_cfg.n_iters * a_f - mini_cfg.n_iters * mini_cfg.b;
  if (p == 0.0 || q == 0.0) return std::nullopt;  // no sign change over H > 0
  double h_star = -q / p;
  if (!(h_star > 0.0) || !std::isfinite(h_star)) return std::nullopt;
  return h_star;
}

}  // namespace gnnlab
