#pragma once

// Run configuration: one JSON document, schema-validated, unknown keys
// rejected. The resolved config is embedded in every checkpoint and report.

#include "asc/data.hpp"
#include "asc/encoder.hpp"
#include "asc/optim.hpp"

#include <cstdint>
#include <string>

#include <json.hpp>

namespace asc {

struct TrainConfig {
    AdamConfig adam;
    int batch_size = 32;
    std::int64_t total_steps = 200;
    std::int64_t warmup_steps = 20;
    double ema_momentum = 0.996;
    int checkpoint_every = 100;

    void validate() const;
};

struct DatasetConfig {
    int num_clips = 64;
    int frame_count = 8;
    double velocity_scale = 1.5;
};

struct ProbeConfig {
    int epochs = 100;
    double lr = 0.1;
    double momentum = 0.0;
    int num_train = 240;
    int num_test = 120;
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    EncoderConfig model;
    TrainConfig train;
    DatasetConfig data;
    AugmentConfig augment;
    ProbeConfig probe;

    void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j); // throws on unknown keys
RunConfig load_run_config(const std::string& path);
std::string config_string(const RunConfig& cfg); // canonical serialization

} // namespace asc
