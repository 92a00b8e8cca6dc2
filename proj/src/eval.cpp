#include "asc/eval.hpp"

#include "asc/grouping.hpp"
#include "asc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace asc {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int num_classes(const FeatureSet& a, const FeatureSet& b) {
    int k = 0;
    for (int y : a.y) k = std::max(k, y + 1);
    for (int y : b.y) k = std::max(k, y + 1);
    return k;
}

} // namespace

FeatureSet extract_features(const ParamStore& params, const std::string& prefix,
                            const EncoderConfig& cfg, const std::vector<SyntheticClip>& clips) {
    FeatureSet out;
    out.x.resize(clips.size());
    out.y.resize(clips.size());
    parallel_chunks(static_cast<int>(clips.size()), [&](int, int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const SyntheticClip& clip = clips[static_cast<std::size_t>(i)];
            const Image& frame = clip.frames[clip.frames.size() / 2];
            Graph g;
            TensorPtr tokens = image_tokens(g, params, prefix, cfg, frame);
            EncodeResult er = encode(g, params, prefix, cfg, tokens);
            TensorPtr rep = l2_normalize_rows(g, er.rep);
            out.x[static_cast<std::size_t>(i)] = rep->data;
            out.y[static_cast<std::size_t>(i)] = clip.label;
        }
    });
    return out;
}

std::vector<SyntheticClip> make_labeled_clips(const RunConfig& cfg, std::uint64_t pool, int count) {
    ClipSpec spec;
    spec.frame_count = cfg.data.frame_count;
    spec.size = cfg.model.image_size;
    spec.velocity_scale = cfg.data.velocity_scale;
    std::vector<SyntheticClip> clips;
    clips.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        clips.push_back(generate_clip(clip_seed(cfg.seed, pool, i), spec));
    }
    return clips;
}

ProbeResult linear_probe(const FeatureSet& train, const FeatureSet& test, const ProbeConfig& pcfg) {
    if (train.x.empty() || test.x.empty()) {
        throw std::invalid_argument("linear_probe: empty split");
    }
    const int d = static_cast<int>(train.x[0].size());
    const int k = num_classes(train, test);
    std::vector<int> seen(static_cast<std::size_t>(k), 0);
    for (int y : train.y) seen[static_cast<std::size_t>(y)] = 1;
    for (int c = 0; c < k; ++c) {
        if (!seen[static_cast<std::size_t>(c)]) {
            throw std::invalid_argument("linear_probe: class " + std::to_string(c) +
                                        " absent from train split");
        }
    }

    const std::size_t n = train.x.size();
    std::vector<double> w(static_cast<std::size_t>(k) * d, 0.0), b(static_cast<std::size_t>(k), 0.0);
    std::vector<double> vw(w.size(), 0.0), vb(b.size(), 0.0);
    std::vector<double> gw(w.size()), gb(b.size()), logits(static_cast<std::size_t>(k));

    auto predict = [&](const std::vector<double>& x) {
        int best = 0;
        for (int c = 0; c < k; ++c) {
            double s = b[static_cast<std::size_t>(c)];
            for (int j = 0; j < d; ++j) s += w[static_cast<std::size_t>(c) * d + j] * x[static_cast<std::size_t>(j)];
            logits[static_cast<std::size_t>(c)] = s;
            if (s > logits[static_cast<std::size_t>(best)]) best = c;
        }
        return best;
    };

    for (int epoch = 0; epoch < pcfg.epochs; ++epoch) {
        std::fill(gw.begin(), gw.end(), 0.0);
        std::fill(gb.begin(), gb.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double>& x = train.x[i];
            predict(x);
            double mx = *std::max_element(logits.begin(), logits.end());
            double z = 0.0;
            for (int c = 0; c < k; ++c) {
                logits[static_cast<std::size_t>(c)] = std::exp(logits[static_cast<std::size_t>(c)] - mx);
                z += logits[static_cast<std::size_t>(c)];
            }
            for (int c = 0; c < k; ++c) {
                const double p = logits[static_cast<std::size_t>(c)] / z;
                const double err = p - (c == train.y[i] ? 1.0 : 0.0);
                gb[static_cast<std::size_t>(c)] += err;
                for (int j = 0; j < d; ++j) {
                    gw[static_cast<std::size_t>(c) * d + j] += err * x[static_cast<std::size_t>(j)];
                }
            }
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < w.size(); ++i) {
            vw[i] = pcfg.momentum * vw[i] + gw[i] * inv_n;
            w[i] -= pcfg.lr * vw[i];
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            vb[i] = pcfg.momentum * vb[i] + gb[i] * inv_n;
            b[i] -= pcfg.lr * vb[i];
        }
    }

    ProbeResult res;
    res.sample_count = static_cast<int>(test.x.size());
    res.per_class.assign(static_cast<std::size_t>(k), 0.0);
    std::vector<int> class_n(static_cast<std::size_t>(k), 0);
    int hits = 0;
    for (std::size_t i = 0; i < test.x.size(); ++i) {
        const int yhat = predict(test.x[i]);
        ++class_n[static_cast<std::size_t>(test.y[i])];
        if (yhat == test.y[i]) {
            ++hits;
            res.per_class[static_cast<std::size_t>(test.y[i])] += 1.0;
        }
    }
    res.top1 = static_cast<double>(hits) / static_cast<double>(test.x.size());
    for (int c = 0; c < k; ++c) {
        if (class_n[static_cast<std::size_t>(c)] > 0) {
            res.per_class[static_cast<std::size_t>(c)] /= class_n[static_cast<std::size_t>(c)];
        }
    }
    int train_hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (predict(train.x[i]) == train.y[i]) ++train_hits;
    }
    res.train_top1 = static_cast<double>(train_hits) / static_cast<double>(n);
    return res;
}

ProbeResult probe_encoder(const RunConfig& cfg, const SiameseModel& model) {
    const std::vector<SyntheticClip> train_clips =
        make_labeled_clips(cfg, 0x51, cfg.probe.num_train);
    const std::vector<SyntheticClip> test_clips = make_labeled_clips(cfg, 0x52, cfg.probe.num_test);
    FeatureSet train = extract_features(model.online, "enc.", cfg.model, train_clips);
    FeatureSet test = extract_features(model.online, "enc.", cfg.model, test_clips);
    return linear_probe(train, test, cfg.probe);
}

const std::vector<std::string>& ablation_variants() {
    static const std::vector<std::string> v{"full",           "no_asc", "fixed_theta",
                                           "learnable_theta", "dfs",    "tome",
                                           "mean",            "max"};
    return v;
}

RunConfig apply_variant(const RunConfig& base, const std::string& variant) {
    RunConfig cfg = base;
    if (variant == "full" || variant == "learnable_theta" || variant == "dfs" ||
        variant == "mean") {
        // the reference configuration along each ablation axis
        cfg.model.asc_enabled = true;
        cfg.model.learnable_theta = true;
        cfg.model.merge_mode = MergeMode::Mean;
    } else if (variant == "no_asc") {
        cfg.model.asc_enabled = false;
    } else if (variant == "fixed_theta") {
        cfg.model.learnable_theta = false;
    } else if (variant == "tome") {
        cfg.model.merge_mode = MergeMode::Tome;
    } else if (variant == "max") {
        cfg.model.merge_mode = MergeMode::Max;
    } else {
        throw std::invalid_argument("unknown ablation variant: " + variant);
    }
    return cfg;
}

std::vector<AblationRow> run_ablation(const RunConfig& base,
                                      const std::vector<std::string>& variants,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::string& csv_path) {
    std::filesystem::create_directories(std::filesystem::path(csv_path).parent_path().empty()
                                            ? "."
                                            : std::filesystem::path(csv_path).parent_path().string());
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << "variant,seed,probe_top1,mean_tokens_ratio,ms_per_step\n";

    std::vector<AblationRow> rows;
    for (const auto& variant : variants) {
        for (std::uint64_t seed : seeds) {
            RunConfig cfg = apply_variant(base, variant);
            cfg.seed = seed;
            cfg.out_dir = base.out_dir + "/ablate_" + variant + "_s" + std::to_string(seed);
            SiameseModel model;
            TrainResult tr = run_training(cfg, model);
            ProbeResult pr = probe_encoder(cfg, model);

            AblationRow row;
            row.variant = variant;
            row.seed = seed;
            row.probe_top1 = pr.top1;
            row.ms_per_step = tr.mean_step_ms;
            if (!tr.ratio_log.empty() && !tr.ratio_log[0].empty()) {
                double acc = 0.0;
                std::size_t cnt = 0;
                for (const auto& step : tr.ratio_log) {
                    for (double r : step) {
                        acc += r;
                        ++cnt;
                    }
                }
                row.mean_tokens_ratio = acc / static_cast<double>(cnt);
            }
            csv << row.variant << "," << row.seed << "," << fmt(row.probe_top1) << ","
                << fmt(row.mean_tokens_ratio) << "," << fmt(row.ms_per_step) << "\n";
            csv.flush();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<BenchRow> bench_tokens(const std::vector<double>& thetas, const std::vector<int>& ns,
                                   int d, std::uint64_t seed, const std::string& csv_path) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << "theta,n,n_out,attn_cost,overhead_cost,measured_ops\n";

    std::vector<BenchRow> rows;
    for (int n : ns) {
        // two well-separated unit clusters with light jitter: within-cluster
        // similarity ~1, cross-cluster ~0
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n)));
        TensorPtr z = make_tensor({n, d});
        for (int i = 0; i < n; ++i) {
            const int axis = (i < n / 2) ? 0 : 1;
            for (int j = 0; j < d; ++j) {
                z->at(i, j) = (j == axis ? 1.0 : 0.0) + normal(rng, 0.0, 0.01);
            }
        }
        int prev_out = -1;
        std::vector<double> sorted_thetas = thetas;
        std::sort(sorted_thetas.begin(), sorted_thetas.end());
        for (double theta : sorted_thetas) {
            Graph g;
            OpCounter counter;
            TensorPtr s = similarity(g, z, &counter);
            TensorPtr a = gate(g, s, scalar_tensor(theta));
            BoolAdjacency adj = binarize(a, 0.5, &counter);
            Partition part = components(adj, &counter);

            BenchRow row;
            row.theta = theta;
            row.n = n;
            row.n_out = part.count;
            row.attn_cost = static_cast<std::int64_t>(part.count) * part.count * d;
            row.overhead_cost = static_cast<std::int64_t>(n) * n * d;
            row.measured_ops = counter.total();
            if (prev_out >= 0 && row.n_out < prev_out) {
                throw std::runtime_error("token count decreased as theta grew (n=" +
                                         std::to_string(n) + ")");
            }
            prev_out = row.n_out;
            csv << fmt(row.theta) << "," << row.n << "," << row.n_out << "," << row.attn_cost
                << "," << row.overhead_cost << "," << row.measured_ops << "\n";
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace asc
