#pragma once

#include <cstdint>
#include <optional>

#include "gnnlab/trainer.hpp"

namespace gnnlab {

/// Two-device hardware model: compute capacity and link bandwidth, both in
/// nodes per second.
struct HardwareProfile {
  double compute_c = 1.0;
  double bandwidth_h = 1.0;
};

struct CostEstimate {
  double t_cal = 0.0;   // seconds per iteration, compute
  double t_comm = 0.0;  // seconds per iteration, communication
  double total_s = 0.0; // n_iters * (t_cal + t_comm)
  TrainMode mode = TrainMode::full;
};

struct TrainingShape {
  double b = 0.0;       // batch size (n_train in full mode)
  double beta = 0.0;    // fan-out size (d_max in full mode)
  double n_iters = 0.0; // iterations to the target
};

/// Closed-form time model: t_cal = (b*beta + b)/C for both modes,
/// t_comm = b/H for mini-batch and (b*beta + b)/H for full-graph.
CostEstimate estimate(const TrainingShape& shape, const HardwareProfile& profile,
                      TrainMode mode);

/// Bandwidth H* where the full and mini configurations cost the same under
/// shared compute capacity, or nullopt when one regime dominates for all
/// H > 0 (or the two are identical everywhere).
std::optional<double> crossover_bandwidth(const TrainingShape& full_cfg,
                                          const TrainingShape& mini_cfg,
                                          double compute_c);

}  // namespace gnnlab
