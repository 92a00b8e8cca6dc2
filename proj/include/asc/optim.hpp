#pragma once

#include "asc/params.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace asc {

struct AdamConfig {
    double lr0 = 0.0016;
    double weight_decay = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct OptimState {
    std::unordered_map<std::string, std::vector<double>> m, v;
    std::int64_t step = 0;

    void init(const ParamStore& params);
};

// Linear warmup 0 -> lr0 over `warmup` steps, then half-cosine decay to 0
// at `total`.
double cosine_lr(std::int64_t step, double lr0, std::int64_t warmup, std::int64_t total);

// Bias-corrected Adam with decoupled weight decay. Updates only parameters
// with requires_grad set. Throws naming the parameter on a NaN gradient.
void adam_step(ParamStore& params, OptimState& state, double rate, const AdamConfig& cfg);

} // namespace asc
