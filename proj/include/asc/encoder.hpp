#pragma once

// Pre-norm transformer encoder with token-grouping layers inserted after
// attention at configured depths. Produces a pooled frame representation.

#include "asc/grouping.hpp"
#include "asc/image.hpp"
#include "asc/params.hpp"
#include "asc/rng.hpp"
#include "asc/tensor.hpp"

#include <string>
#include <vector>

namespace asc {

enum class AffinitySource { Tokens, Keys };

struct EncoderConfig {
    int depth = 4;
    int embed_dim = 64;
    int heads = 4;
    int mlp_ratio = 4;
    int patch_size = 4;
    int image_size = 32;
    bool use_positional = true;

    bool asc_enabled = true;
    std::vector<int> asc_positions{0, 2};
    double theta_init = 0.2;
    bool learnable_theta = true;
    double edge_cut = 0.5;
    double surrogate_lambda = 0.1;
    AffinitySource affinity_source = AffinitySource::Tokens;
    MergeMode merge_mode = MergeMode::Mean;
    int tome_r = 0; // 0 -> N/4 per layer

    int max_tokens() const {
        return (image_size / patch_size) * (image_size / patch_size);
    }
    void validate() const;
};

struct BlockParams {
    TensorPtr wq, wk, wv, wo;
    TensorPtr mlp_w1, mlp_b1, mlp_w2, mlp_b2;
    TensorPtr ln1_g, ln1_b, ln2_g, ln2_b;
    int heads = 1;
};

struct EncodeResult {
    TensorPtr rep;                       // 1 x d, pooled, not yet normalized
    std::vector<TensorPtr> surrogates;   // one per grouping invocation
    std::vector<Partition> partitions;
    std::vector<double> token_ratios;    // N_out / N_in per grouping invocation
    std::vector<int> token_trace;        // token count after each block
};

// Registers all encoder parameters under `prefix` (patch projection,
// positional table, per-block weights, per-position theta).
void init_encoder_params(ParamStore& store, const std::string& prefix,
                         const EncoderConfig& cfg, Rng& rng);

BlockParams block_params(const ParamStore& store, const std::string& prefix,
                         int block, int heads);

// Multi-head scaled dot-product attention. Invalid rows contribute nothing
// as keys and produce zero output rows. keys_out, when non-null, receives
// the pre-split key matrix (for key-based affinity).
TensorPtr attention(Graph& g, const TensorPtr& x, const std::vector<int>& mask,
                    const BlockParams& bp, TensorPtr* keys_out = nullptr);

// Image -> initial token sequence using the store's patch parameters.
TensorPtr image_tokens(Graph& g, const ParamStore& store, const std::string& prefix,
                       const EncoderConfig& cfg, const Image& img);

EncodeResult encode(Graph& g, const ParamStore& store, const std::string& prefix,
                    const EncoderConfig& cfg, const TensorPtr& tokens,
                    std::vector<int> mask = {}, OpCounter* counter = nullptr);

} // namespace asc
