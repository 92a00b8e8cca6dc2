#include "asc/encoder.hpp"

#include "asc/patch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asc {
namespace {

TensorPtr init_weight(Rng& rng, int rows, int cols, double stddev = 0.02) {
    TensorPtr t = make_tensor({rows, cols}, true);
    for (auto& v : t->data) v = normal(rng, 0.0, stddev);
    return t;
}

TensorPtr init_const(int rows, int cols, double value, bool requires_grad = true) {
    TensorPtr t = make_tensor({rows, cols}, requires_grad);
    std::fill(t->data.begin(), t->data.end(), value);
    return t;
}

} // namespace

void EncoderConfig::validate() const {
    if (depth < 0) throw std::invalid_argument("encoder depth must be non-negative");
    if (embed_dim <= 0 || heads <= 0) throw std::invalid_argument("bad encoder dimensions");
    if (embed_dim % heads != 0) {
        throw std::invalid_argument("embed_dim must be divisible by heads");
    }
    if (patch_size <= 0 || image_size % patch_size != 0) {
        throw std::invalid_argument("image_size must be divisible by patch_size");
    }
    for (int p : asc_positions) {
        if (p < 0 || p >= depth) {
            throw std::invalid_argument("asc position outside block range");
        }
    }
}

void init_encoder_params(ParamStore& store, const std::string& prefix,
                         const EncoderConfig& cfg, Rng& rng) {
    cfg.validate();
    const int d = cfg.embed_dim;
    const int h = d * cfg.mlp_ratio;
    store.add(prefix + "patch.proj", init_weight(rng, 3 * cfg.patch_size * cfg.patch_size, d));
    store.add(prefix + "patch.bias", init_const(1, d, 0.0));
    store.add(prefix + "patch.pos", init_weight(rng, cfg.max_tokens(), d));
    for (int b = 0; b < cfg.depth; ++b) {
        const std::string bp = prefix + "block" + std::to_string(b) + ".";
        store.add(bp + "wq", init_weight(rng, d, d));
        store.add(bp + "wk", init_weight(rng, d, d));
        store.add(bp + "wv", init_weight(rng, d, d));
        store.add(bp + "wo", init_weight(rng, d, d));
        store.add(bp + "mlp_w1", init_weight(rng, d, h));
        store.add(bp + "mlp_b1", init_const(1, h, 0.0));
        store.add(bp + "mlp_w2", init_weight(rng, h, d));
        store.add(bp + "mlp_b2", init_const(1, d, 0.0));
        store.add(bp + "ln1_g", init_const(1, d, 1.0));
        store.add(bp + "ln1_b", init_const(1, d, 0.0));
        store.add(bp + "ln2_g", init_const(1, d, 1.0));
        store.add(bp + "ln2_b", init_const(1, d, 0.0));
    }
    for (std::size_t i = 0; i < cfg.asc_positions.size(); ++i) {
        const bool trainable = cfg.learnable_theta && cfg.asc_enabled;
        store.add(prefix + "theta" + std::to_string(i),
                  make_tensor({1, 1}, {cfg.theta_init}, trainable));
    }
}

BlockParams block_params(const ParamStore& store, const std::string& prefix,
                         int block, int heads) {
    const std::string bp = prefix + "block" + std::to_string(block) + ".";
    BlockParams p;
    p.wq = store.get(bp + "wq");
    p.wk = store.get(bp + "wk");
    p.wv = store.get(bp + "wv");
    p.wo = store.get(bp + "wo");
    p.mlp_w1 = store.get(bp + "mlp_w1");
    p.mlp_b1 = store.get(bp + "mlp_b1");
    p.mlp_w2 = store.get(bp + "mlp_w2");
    p.mlp_b2 = store.get(bp + "mlp_b2");
    p.ln1_g = store.get(bp + "ln1_g");
    p.ln1_b = store.get(bp + "ln1_b");
    p.ln2_g = store.get(bp + "ln2_g");
    p.ln2_b = store.get(bp + "ln2_b");
    p.heads = heads;
    return p;
}

TensorPtr attention(Graph& g, const TensorPtr& x, const std::vector<int>& mask,
                    const BlockParams& bp, TensorPtr* keys_out) {
    const int d = x->cols();
    if (d % bp.heads != 0) throw std::invalid_argument("embed_dim must be divisible by heads");
    const int dh = d / bp.heads;
    TensorPtr q = matmul(g, x, bp.wq);
    TensorPtr k = matmul(g, x, bp.wk);
    TensorPtr v = matmul(g, x, bp.wv);
    if (keys_out) *keys_out = k;
    std::vector<TensorPtr> head_out;
    head_out.reserve(bp.heads);
    for (int h = 0; h < bp.heads; ++h) {
        TensorPtr qh = slice_cols(g, q, h * dh, dh);
        TensorPtr kh = slice_cols(g, k, h * dh, dh);
        TensorPtr vh = slice_cols(g, v, h * dh, dh);
        TensorPtr logits = scale(g, matmul(g, qh, transpose(g, kh)), 1.0 / std::sqrt(dh));
        TensorPtr attn = mask.empty() ? softmax_rows(g, logits)
                                      : masked_softmax_rows(g, logits, mask);
        head_out.push_back(matmul(g, attn, vh));
    }
    TensorPtr out = matmul(g, concat_cols(g, head_out), bp.wo);
    if (!mask.empty()) out = mask_rows(g, out, mask);
    return out;
}

TensorPtr image_tokens(Graph& g, const ParamStore& store, const std::string& prefix,
                       const EncoderConfig& cfg, const Image& img) {
    TensorPtr patches = extract_patches(img, cfg.patch_size);
    return embed_patches(g, patches, store.get(prefix + "patch.proj"),
                         store.get(prefix + "patch.bias"), store.get(prefix + "patch.pos"),
                         cfg.use_positional);
}

EncodeResult encode(Graph& g, const ParamStore& store, const std::string& prefix,
                    const EncoderConfig& cfg, const TensorPtr& tokens,
                    std::vector<int> mask, OpCounter* counter) {
    cfg.validate();
    EncodeResult res;
    TensorPtr x = tokens;
    auto valid_count = [&mask](int rows) {
        if (mask.empty()) return rows;
        int c = 0;
        for (int v : mask) c += v != 0;
        return c;
    };

    for (int b = 0; b < cfg.depth; ++b) {
        BlockParams bp = block_params(store, prefix, b, cfg.heads);
        TensorPtr normed = layer_norm(g, x, bp.ln1_g, bp.ln1_b);
        TensorPtr keys;
        TensorPtr attn = attention(g, normed, mask, bp,
                                   cfg.affinity_source == AffinitySource::Keys ? &keys : nullptr);
        x = add(g, x, attn);

        auto pos = std::find(cfg.asc_positions.begin(), cfg.asc_positions.end(), b);
        if (cfg.asc_enabled && pos != cfg.asc_positions.end()) {
            const int n_in = valid_count(x->rows());
            TensorPtr zv = x;
            TensorPtr affinity = cfg.affinity_source == AffinitySource::Keys ? keys : x;
            if (!mask.empty()) {
                std::vector<int> idx;
                for (int i = 0; i < static_cast<int>(mask.size()); ++i)
                    if (mask[i] != 0) idx.push_back(i);
                zv = gather_rows(g, x, idx);
                affinity = cfg.affinity_source == AffinitySource::Keys
                               ? gather_rows(g, keys, idx)
                               : zv;
            }
            const std::size_t theta_idx = pos - cfg.asc_positions.begin();
            TensorPtr theta = store.get(prefix + "theta" + std::to_string(theta_idx));
            AscLayerOptions opt;
            opt.edge_cut = cfg.edge_cut;
            opt.surrogate_lambda = cfg.surrogate_lambda;
            opt.merge = cfg.merge_mode;
            opt.tome_r = cfg.tome_r > 0 ? cfg.tome_r : zv->rows() / 4;
            AscLayerResult layer = asc_layer(g, zv, affinity, theta, opt, counter);
            x = layer.tokens;
            mask.clear(); // merged sequence is fully valid
            res.surrogates.push_back(layer.surrogate);
            res.partitions.push_back(std::move(layer.partition));
            res.token_ratios.push_back(static_cast<double>(x->rows()) / n_in);
        }

        TensorPtr normed2 = layer_norm(g, x, bp.ln2_g, bp.ln2_b);
        TensorPtr hidden = gelu(g, add_rowvec(g, matmul(g, normed2, bp.mlp_w1), bp.mlp_b1));
        TensorPtr mlp = add_rowvec(g, matmul(g, hidden, bp.mlp_w2), bp.mlp_b2);
        if (!mask.empty()) mlp = mask_rows(g, mlp, mask);
        x = add(g, x, mlp);
        res.token_trace.push_back(valid_count(x->rows()));
    }

    res.rep = mask.empty() ? mean_rows(g, x) : masked_mean_rows(g, x, mask);
    return res;
}

} // namespace asc
