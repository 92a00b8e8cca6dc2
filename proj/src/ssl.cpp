#include "asc/ssl.hpp"

#include <cmath>
#include <stdexcept>

namespace asc {
namespace {

TensorPtr init_weight(Rng& rng, int rows, int cols) {
    TensorPtr t = make_tensor({rows, cols}, true);
    for (auto& v : t->data) v = normal(rng, 0.0, 0.02);
    return t;
}

TensorPtr init_const(int rows, int cols, double value) {
    TensorPtr t = make_tensor({rows, cols}, true);
    std::fill(t->data.begin(), t->data.end(), value);
    return t;
}

TensorPtr linear(Graph& g, const ParamStore& s, const std::string& p, const TensorPtr& x,
                 int layer) {
    const std::string i = std::to_string(layer);
    return add_rowvec(g, matmul(g, x, s.get(p + "w" + i)), s.get(p + "b" + i));
}

TensorPtr norm_act(Graph& g, const ParamStore& s, const std::string& p, const TensorPtr& x,
                   int layer) {
    const std::string i = std::to_string(layer);
    return gelu(g, layer_norm(g, x, s.get(p + "ln" + i + "_g"), s.get(p + "ln" + i + "_b")));
}

} // namespace

void init_projector_params(ParamStore& store, const std::string& prefix, int d, Rng& rng) {
    const int h = 2 * d;
    store.add(prefix + "w1", init_weight(rng, d, h));
    store.add(prefix + "b1", init_const(1, h, 0.0));
    store.add(prefix + "ln1_g", init_const(1, h, 1.0));
    store.add(prefix + "ln1_b", init_const(1, h, 0.0));
    store.add(prefix + "w2", init_weight(rng, h, h));
    store.add(prefix + "b2", init_const(1, h, 0.0));
    store.add(prefix + "ln2_g", init_const(1, h, 1.0));
    store.add(prefix + "ln2_b", init_const(1, h, 0.0));
    store.add(prefix + "w3", init_weight(rng, h, d));
    store.add(prefix + "b3", init_const(1, d, 0.0));
}

void init_predictor_params(ParamStore& store, const std::string& prefix, int d, Rng& rng) {
    const int h = 2 * d;
    store.add(prefix + "w1", init_weight(rng, d, h));
    store.add(prefix + "b1", init_const(1, h, 0.0));
    store.add(prefix + "ln1_g", init_const(1, h, 1.0));
    store.add(prefix + "ln1_b", init_const(1, h, 0.0));
    store.add(prefix + "w2", init_weight(rng, h, d));
    store.add(prefix + "b2", init_const(1, d, 0.0));
}

TensorPtr apply_projector(Graph& g, const ParamStore& s, const std::string& p,
                          const TensorPtr& x) {
    TensorPtr h = norm_act(g, s, p, linear(g, s, p, x, 1), 1);
    h = norm_act(g, s, p, linear(g, s, p, h, 2), 2);
    return linear(g, s, p, h, 3);
}

TensorPtr apply_predictor(Graph& g, const ParamStore& s, const std::string& p,
                          const TensorPtr& x) {
    TensorPtr h = norm_act(g, s, p, linear(g, s, p, x, 1), 1);
    return linear(g, s, p, h, 2);
}

TensorPtr project_and_normalize(Graph& g, const ParamStore& s, const std::string& prefix,
                                const TensorPtr& x) {
    return l2_normalize_rows(g, apply_projector(g, s, prefix, x));
}

TensorPtr pair_loss(Graph& g, const TensorPtr& p, const TensorPtr& z) {
    if (p->size() != z->size()) throw std::invalid_argument("pair_loss: dimension mismatch");
    auto norm = [](const TensorPtr& t) {
        double s = 0.0;
        for (double v : t->data) s += v * v;
        return std::sqrt(s);
    };
    if (std::fabs(norm(p) - 1.0) > 1e-6 || std::fabs(norm(z) - 1.0) > 1e-6) {
        throw std::invalid_argument("pair_loss: inputs must be unit-normalized");
    }
    return add(g, scale(g, dot(g, p, z), -2.0), scalar_tensor(2.0));
}

void SiameseModel::init(std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    online = ParamStore();
    init_encoder_params(online, "enc.", cfg, rng);
    init_projector_params(online, "proj.", cfg.embed_dim, rng);
    init_predictor_params(online, "pred.", cfg.embed_dim, rng);
    // target mirrors encoder + projector, initialized to the online values
    target = ParamStore();
    for (const auto& name : online.names()) {
        if (name.rfind("enc.", 0) == 0 || name.rfind("proj.", 0) == 0) {
            TensorPtr src = online.get(name);
            target.add(name, make_tensor(src->shape, src->data, false));
        }
    }
}

PairForward siamese_pair_forward(Graph& g, const SiameseModel& model, const Image& view_i,
                                 const Image& view_j) {
    const EncoderConfig& cfg = model.cfg;
    PairForward out;

    auto online_branch = [&](const Image& img, std::vector<TensorPtr>& surrogates,
                             std::vector<double>& ratios) {
        TensorPtr tokens = image_tokens(g, model.online, "enc.", cfg, img);
        EncodeResult er = encode(g, model.online, "enc.", cfg, tokens);
        surrogates.insert(surrogates.end(), er.surrogates.begin(), er.surrogates.end());
        ratios = er.token_ratios;
        TensorPtr proj = apply_projector(g, model.online, "proj.", er.rep);
        TensorPtr pred = apply_predictor(g, model.online, "pred.", proj);
        return l2_normalize_rows(g, pred);
    };
    auto target_branch = [&](const Image& img) {
        TensorPtr tokens = image_tokens(g, model.target, "enc.", cfg, img);
        EncodeResult er = encode(g, model.target, "enc.", cfg, tokens);
        TensorPtr proj = apply_projector(g, model.target, "proj.", er.rep);
        return stop_gradient(l2_normalize_rows(g, proj));
    };

    std::vector<TensorPtr> surrogates;
    std::vector<double> ratios_i, ratios_j;
    TensorPtr p_i = online_branch(view_i, surrogates, ratios_i);
    TensorPtr p_j = online_branch(view_j, surrogates, ratios_j);
    TensorPtr z_i = target_branch(view_i);
    TensorPtr z_j = target_branch(view_j);

    TensorPtr sym = scale(g, add(g, pair_loss(g, p_i, z_j), pair_loss(g, p_j, z_i)), 0.5);
    out.pair_loss_value = sym->data[0];

    TensorPtr total = sym;
    if (!surrogates.empty()) {
        TensorPtr acc = surrogates[0];
        for (std::size_t i = 1; i < surrogates.size(); ++i) acc = add(g, acc, surrogates[i]);
        total = add(g, total, scale(g, acc, 0.5)); // per-view average
    }
    out.loss = total;

    for (std::size_t k = 0; k < ratios_i.size() && k < ratios_j.size(); ++k) {
        out.token_ratios.push_back(0.5 * (ratios_i[k] + ratios_j[k]));
    }
    return out;
}

void ema_update(SiameseModel& model, double momentum) {
    if (momentum < 0.0 || momentum >= 1.0) {
        throw std::invalid_argument("ema momentum must be in [0,1)");
    }
    for (const auto& name : model.target.names()) {
        if (!model.online.has(name)) {
            throw std::invalid_argument("ema_update: online store missing " + name);
        }
        TensorPtr t = model.target.get(name);
        TensorPtr o = model.online.get(name);
        if (t->shape != o->shape) {
            throw std::invalid_argument("ema_update: shape mismatch for " + name);
        }
        for (std::size_t i = 0; i < t->size(); ++i) {
            t->data[i] = momentum * t->data[i] + (1.0 - momentum) * o->data[i];
        }
    }
}

} // namespace asc
