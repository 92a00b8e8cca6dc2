#pragma once

// Checkpoint file: magic "ASC1", version, resolved config JSON, then named
// parameter records (rank, extents, little-endian 64-bit floats). Online
// parameters are stored under "online/", target under "target/".

#include "asc/params.hpp"

#include <string>
#include <vector>

namespace asc {

struct CheckpointRecord {
    std::string name;
    std::vector<int> extents;
    std::vector<double> values;
};

struct Checkpoint {
    std::string config_json;
    std::vector<CheckpointRecord> records;
};

// Atomic: writes to a temp file then renames.
void save_checkpoint(const std::string& path, const std::string& config_json,
                     const ParamStore& online, const ParamStore& target);
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Copies values whose name carries the given store prefix ("online/" or
// "target/") into structurally matching parameters.
void restore_params(ParamStore& store, const Checkpoint& ckpt, const std::string& store_prefix);

} // namespace asc
