#include "asc/gradcheck_suite.hpp"

#include "asc/data.hpp"
#include "asc/grad_check.hpp"
#include "asc/grouping.hpp"
#include "asc/rng.hpp"
#include "asc/ssl.hpp"

#include <algorithm>
#include <functional>

namespace asc {
namespace {

constexpr double kH = 1e-5;
constexpr double kOpTol = 1e-4;
constexpr double kModelTol = 1e-3;

TensorPtr random_tensor(Rng& rng, int r, int c, double stddev = 1.0, bool requires_grad = true) {
    TensorPtr t = make_tensor({r, c}, requires_grad);
    for (auto& v : t->data) v = normal(rng, 0.0, stddev);
    return t;
}

// Checks d(sum(out .* C))/d(input) for every grad-carrying input; C is a
// fixed random weighting so symmetric outputs cannot hide sign errors.
struct OpCheck {
    Rng& rng;
    std::vector<GradCheckEntry>& entries;

    void run(const std::string& name, const std::vector<TensorPtr>& inputs,
             const std::function<TensorPtr(Graph&)>& forward) {
        TensorPtr coeffs;
        {
            Graph g;
            TensorPtr probe = forward(g);
            coeffs = random_tensor(rng, probe->rows(), probe->cols(), 1.0, false);
        }
        auto scalar_f = [&]() {
            Graph g;
            TensorPtr out = forward(g);
            double s = 0.0;
            for (std::size_t i = 0; i < out->size(); ++i) s += out->data[i] * coeffs->data[i];
            return s;
        };
        for (const TensorPtr& x : inputs) {
            x->ensure_grad();
            x->zero_grad();
        }
        Graph g;
        TensorPtr out = forward(g);
        g.backward(sum_all(g, mul(g, out, coeffs)));

        GradCheckEntry e{name, 0.0, kOpTol, false};
        for (const TensorPtr& x : inputs) {
            if (!x->requires_grad) continue;
            TensorPtr fd = finite_diff(scalar_f, x, kH);
            e.max_err = std::max(e.max_err, max_rel_error(x->grad, fd->data));
        }
        e.passed = e.max_err <= e.tolerance;
        entries.push_back(std::move(e));
    }
};

void check_model(Rng& rng, std::vector<GradCheckEntry>& entries) {
    EncoderConfig cfg;
    cfg.depth = 2;
    cfg.embed_dim = 32;
    cfg.heads = 4;
    cfg.patch_size = 4;
    cfg.image_size = 16; // 16 tokens
    cfg.asc_positions = {0};
    SiameseModel model;
    model.cfg = cfg;
    model.init(rng());

    ClipSpec spec;
    spec.size = cfg.image_size;
    SyntheticClip clip = generate_clip(rng(), spec);
    const Image& vi = clip.frames[0];
    const Image& vj = clip.frames[clip.frames.size() - 1];

    auto scalar_f = [&]() {
        Graph g;
        return siamese_pair_forward(g, model, vi, vj).loss->data[0];
    };

    Graph g;
    PairForward pf = siamese_pair_forward(g, model, vi, vj);
    g.backward(pf.loss);

    // representative tensors from every stage, including the threshold whose
    // only gradient path is the partition surrogate
    const std::vector<std::string> picks{"enc.theta0",      "enc.patch.bias", "enc.block0.wq",
                                         "enc.block0.mlp_b1", "enc.block1.ln1_g", "enc.block1.wo",
                                         "proj.w3",         "proj.b1",        "pred.w2"};
    GradCheckEntry e{"full_model", 0.0, kModelTol, false};
    for (const auto& name : picks) {
        TensorPtr x = model.online.get(name);
        TensorPtr fd = finite_diff(scalar_f, x, kH);
        e.max_err = std::max(e.max_err, max_rel_error(x->grad, fd->data));
    }
    e.passed = e.max_err <= e.tolerance;
    entries.push_back(std::move(e));
}

} // namespace

std::vector<GradCheckEntry> run_gradient_suite(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x6c));
    std::vector<GradCheckEntry> entries;
    OpCheck op{rng, entries};

    {
        TensorPtr a = random_tensor(rng, 3, 4), b = random_tensor(rng, 4, 5);
        op.run("matmul", {a, b}, [&](Graph& g) { return matmul(g, a, b); });
    }
    {
        TensorPtr a = random_tensor(rng, 3, 5);
        op.run("transpose", {a}, [&](Graph& g) { return transpose(g, a); });
    }
    {
        TensorPtr a = random_tensor(rng, 4, 4), b = random_tensor(rng, 4, 4);
        op.run("add", {a, b}, [&](Graph& g) { return add(g, a, b); });
        op.run("sub", {a, b}, [&](Graph& g) { return sub(g, a, b); });
        op.run("mul", {a, b}, [&](Graph& g) { return mul(g, a, b); });
    }
    {
        TensorPtr a = random_tensor(rng, 3, 3);
        op.run("scale", {a}, [&](Graph& g) { return scale(g, a, -1.7); });
    }
    {
        TensorPtr a = random_tensor(rng, 4, 4);
        TensorPtr s = scalar_tensor(0.3, true);
        op.run("sub_broadcast_scalar", {a, s},
               [&](Graph& g) { return sub_broadcast_scalar(g, a, s); });
    }
    {
        TensorPtr a = random_tensor(rng, 3, 6);
        op.run("sigmoid", {a}, [&](Graph& g) { return sigmoid(g, a); });
        op.run("gelu", {a}, [&](Graph& g) { return gelu(g, a); });
        op.run("softmax_rows", {a}, [&](Graph& g) { return softmax_rows(g, a); });
    }
    {
        TensorPtr a = random_tensor(rng, 3, 6);
        const std::vector<int> key_mask{1, 0, 1, 1, 0, 1};
        op.run("masked_softmax_rows", {a},
               [&](Graph& g) { return masked_softmax_rows(g, a, key_mask); });
    }
    {
        TensorPtr x = random_tensor(rng, 4, 8);
        TensorPtr gain = random_tensor(rng, 1, 8, 0.5);
        TensorPtr bias = random_tensor(rng, 1, 8, 0.5);
        for (auto& v : gain->data) v += 1.0;
        op.run("layer_norm", {x, gain, bias},
               [&](Graph& g) { return layer_norm(g, x, gain, bias); });
    }
    {
        TensorPtr x = random_tensor(rng, 4, 8);
        op.run("l2_normalize_rows", {x}, [&](Graph& g) { return l2_normalize_rows(g, x); });
        op.run("mean_rows", {x}, [&](Graph& g) { return mean_rows(g, x); });
        op.run("sum_all", {x}, [&](Graph& g) { return sum_all(g, x); });
    }
    {
        TensorPtr x = random_tensor(rng, 5, 6);
        const std::vector<int> row_mask{1, 1, 0, 1, 0};
        op.run("masked_mean_rows", {x},
               [&](Graph& g) { return masked_mean_rows(g, x, row_mask); });
        op.run("mask_rows", {x}, [&](Graph& g) { return mask_rows(g, x, row_mask); });
    }
    {
        TensorPtr a = random_tensor(rng, 1, 7), b = random_tensor(rng, 1, 7);
        op.run("dot", {a, b}, [&](Graph& g) { return dot(g, a, b); });
    }
    {
        TensorPtr x = random_tensor(rng, 4, 6);
        TensorPtr bias = random_tensor(rng, 1, 6);
        op.run("add_rowvec", {x, bias}, [&](Graph& g) { return add_rowvec(g, x, bias); });
        op.run("slice_cols", {x}, [&](Graph& g) { return slice_cols(g, x, 2, 3); });
    }
    {
        TensorPtr a = random_tensor(rng, 4, 3), b = random_tensor(rng, 4, 2);
        op.run("concat_cols", {a, b}, [&](Graph& g) {
            return concat_cols(g, {a, b});
        });
    }
    {
        TensorPtr x = random_tensor(rng, 5, 4);
        const std::vector<int> idx{4, 0, 2, 0};
        op.run("gather_rows", {x}, [&](Graph& g) { return gather_rows(g, x, idx); });
    }
    {
        TensorPtr z = random_tensor(rng, 6, 4);
        op.run("similarity", {z}, [&](Graph& g) { return similarity(g, z); });
    }
    {
        TensorPtr s = random_tensor(rng, 5, 5);
        // gate expects a symmetric matrix downstream, but its math does not
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < i; ++j) s->at(i, j) = s->at(j, i);
        TensorPtr theta = scalar_tensor(0.2, true);
        op.run("gate", {s, theta}, [&](Graph& g) { return gate(g, s, theta); });
    }
    {
        TensorPtr z = random_tensor(rng, 6, 4);
        Partition part;
        part.labels = {0, 1, 0, 2, 1, 0};
        part.count = 3;
        part.members = {{0, 2, 5}, {1, 4}, {3}};
        op.run("merge_mean", {z}, [&](Graph& g) { return merge_mean(g, z, part); });
        op.run("merge_max", {z}, [&](Graph& g) { return merge_max(g, z, part); });
        op.run("merge_tome", {z}, [&](Graph& g) { return merge_tome(g, z, 2); });

        TensorPtr a = random_tensor(rng, 6, 6, 0.3);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < i; ++j) a->at(i, j) = a->at(j, i);
            a->at(i, i) = 1.0;
        }
        op.run("partition_agreement", {a},
               [&](Graph& g) { return partition_agreement(g, a, part); });
    }
    {
        // pair loss on normalized rows, gradient into the raw embeddings
        TensorPtr p = random_tensor(rng, 1, 8), z = random_tensor(rng, 1, 8);
        op.run("pair_loss", {p, z}, [&](Graph& g) {
            return pair_loss(g, l2_normalize_rows(g, p), l2_normalize_rows(g, z));
        });
    }

    check_model(rng, entries);
    return entries;
}

bool all_passed(const std::vector<GradCheckEntry>& entries) {
    for (const auto& e : entries) {
        if (!e.passed) return false;
    }
    return true;
}

} // namespace asc
