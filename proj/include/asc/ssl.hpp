#pragma once

// Siamese self-supervised objective: online encoder + projector + predictor
// against an EMA target encoder + projector, positive-pair loss on
// L2-normalized embeddings, stop-gradient on the target branch.

#include "asc/encoder.hpp"
#include "asc/image.hpp"
#include "asc/params.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace asc {

struct SiameseModel {
    EncoderConfig cfg;
    ParamStore online; // enc.* proj.* pred.*
    ParamStore target; // enc.* proj.*, never carries gradients

    void init(std::uint64_t seed);
};

// 3-layer projector / 2-layer predictor, hidden width 2*d, layer-norm and
// GELU between layers.
void init_projector_params(ParamStore& store, const std::string& prefix, int d, Rng& rng);
void init_predictor_params(ParamStore& store, const std::string& prefix, int d, Rng& rng);

TensorPtr apply_projector(Graph& g, const ParamStore& store, const std::string& prefix,
                          const TensorPtr& x);
TensorPtr apply_predictor(Graph& g, const ParamStore& store, const std::string& prefix,
                          const TensorPtr& x);

// head MLP followed by row L2 normalization; output rows are unit vectors.
TensorPtr project_and_normalize(Graph& g, const ParamStore& store, const std::string& prefix,
                                const TensorPtr& x);

// 2 - 2<p,z> for unit vectors; throws if either norm deviates from 1 by
// more than 1e-6. Gradient flows only into branches that carry it.
TensorPtr pair_loss(Graph& g, const TensorPtr& p, const TensorPtr& z);

struct PairForward {
    TensorPtr loss;                  // symmetrized loss + surrogate terms
    double pair_loss_value = 0.0;    // symmetrized pair loss alone
    std::vector<double> token_ratios; // per grouping position, mean of both views
};

// Full forward for one positive pair: both views through the online branch
// (predictor output) and the target branch (stop-gradient), symmetrized.
PairForward siamese_pair_forward(Graph& g, const SiameseModel& model, const Image& view_i,
                                 const Image& view_j);

// target <- m*target + (1-m)*online for every shared-structure parameter.
void ema_update(SiameseModel& model, double momentum);

} // namespace asc
