#pragma once

// Frozen-feature linear probe, the ablation harness, and the token-count /
// cost benchmark.

#include "asc/config.hpp"
#include "asc/data.hpp"
#include "asc/ssl.hpp"
#include "asc/trainer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace asc {

struct FeatureSet {
    std::vector<std::vector<double>> x; // one row per sample
    std::vector<int> y;
};

struct ProbeResult {
    double top1 = 0.0;
    std::vector<double> per_class; // top1 restricted to each class
    int sample_count = 0;
    double train_top1 = 0.0;
};

// Pooled representation of each clip's middle frame, L2-normalized. The
// encoder parameters are read only; no gradients flow.
FeatureSet extract_features(const ParamStore& params, const std::string& prefix,
                            const EncoderConfig& cfg, const std::vector<SyntheticClip>& clips);

// Deterministic labeled clips for a probe split; labels cycle through the
// shape classes.
std::vector<SyntheticClip> make_labeled_clips(const RunConfig& cfg, std::uint64_t pool, int count);

// Softmax cross-entropy on a single linear layer, full-batch gradient
// descent. Throws if the train split is missing a class.
ProbeResult linear_probe(const FeatureSet& train, const FeatureSet& test, const ProbeConfig& pcfg);

// End to end: build both splits, extract features with the online encoder,
// fit the head, report held-out accuracy.
ProbeResult probe_encoder(const RunConfig& cfg, const SiameseModel& model);

// ---- ablation harness --------------------------------------------------

struct AblationRow {
    std::string variant;
    std::uint64_t seed = 0;
    double probe_top1 = 0.0;
    double mean_tokens_ratio = 1.0;
    double ms_per_step = 0.0;
};

// full / no_asc / fixed_theta / learnable_theta / dfs / tome / mean / max
const std::vector<std::string>& ablation_variants();

// Base config with exactly the ablated axis changed; throws on an unknown
// variant id.
RunConfig apply_variant(const RunConfig& base, const std::string& variant);

// Trains and probes every (variant, seed) pair; writes one CSV row each.
std::vector<AblationRow> run_ablation(const RunConfig& base,
                                      const std::vector<std::string>& variants,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::string& csv_path);

// ---- token benchmark ---------------------------------------------------

struct BenchRow {
    double theta = 0.0;
    int n = 0;
    int n_out = 0;
    std::int64_t attn_cost = 0;     // n_out^2 * d, attention cost after merging
    std::int64_t overhead_cost = 0; // n^2 * d, grouping overhead
    std::int64_t measured_ops = 0;  // instrumented elementary operations
};

// Two separated token clusters per input; sweeps theta and N, writes a CSV,
// and verifies that n_out is non-decreasing in theta for every N.
std::vector<BenchRow> bench_tokens(const std::vector<double>& thetas, const std::vector<int>& ns,
                                   int d, std::uint64_t seed, const std::string& csv_path);

} // namespace asc
