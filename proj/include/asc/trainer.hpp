#pragma once

// Optimization loop: data pipeline, batched gradient accumulation, Adam with
// cosine schedule, EMA target update, CSV metrics and checkpointing.

#include "asc/config.hpp"
#include "asc/ssl.hpp"

#include <string>
#include <vector>

namespace asc {

struct TrainResult {
    std::vector<double> losses;                    // mean pair loss per step
    std::vector<std::vector<double>> theta_log;    // per step, per grouping position
    std::vector<std::vector<double>> ratio_log;    // per step, per grouping position
    std::string metrics_path;
    std::string checkpoint_path;
    double mean_step_ms = 0.0;
};

// Deterministic clip seed for (run, pool, index); the label cycles with the
// index so every class is present in any contiguous block of >= 3 clips.
std::uint64_t clip_seed(std::uint64_t run_seed, std::uint64_t pool, int index);

// One full training run. Writes <out_dir>/metrics.csv and
// <out_dir>/checkpoint.asc; the model is left in its final state.
TrainResult run_training(const RunConfig& cfg, SiameseModel& model);
TrainResult run_training(const RunConfig& cfg); // discards the model

} // namespace asc
