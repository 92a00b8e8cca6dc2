#include "asc/trainer.hpp"

#include "asc/checkpoint.hpp"
#include "asc/parallel.hpp"

#include <chrono>
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

struct Replica {
    SiameseModel model;
};

} // namespace

std::uint64_t clip_seed(std::uint64_t run_seed, std::uint64_t pool, int index) {
    // label = seed % 3 cycles with the index; content still varies per run.
    // The mix is shifted so the multiply cannot wrap and disturb the residue.
    return 3ULL * (mix_seed(run_seed, pool, static_cast<std::uint64_t>(index)) >> 2) +
           static_cast<std::uint64_t>(index % 3);
}

TrainResult run_training(const RunConfig& cfg, SiameseModel& model) {
    cfg.validate();
    model.cfg = cfg.model;
    model.init(cfg.seed);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    TrainResult res;
    res.metrics_path = cfg.out_dir + "/metrics.csv";
    res.checkpoint_path = cfg.out_dir + "/checkpoint.asc";
    const std::string cfg_json = config_string(cfg);

    const std::size_t n_pos = cfg.model.asc_positions.size();
    std::ofstream metrics(res.metrics_path, std::ios::binary);
    if (!metrics) throw std::runtime_error("cannot write " + res.metrics_path);
    metrics << "step,loss,lr";
    for (std::size_t i = 0; i < n_pos; ++i) metrics << ",theta_" << i;
    for (std::size_t i = 0; i < n_pos; ++i) metrics << ",tokens_ratio_" << i;
    metrics << "\n";

    ClipSpec clip_spec;
    clip_spec.frame_count = cfg.data.frame_count;
    clip_spec.size = cfg.model.image_size;
    clip_spec.velocity_scale = cfg.data.velocity_scale;
    std::vector<SyntheticClip> clips;
    clips.reserve(cfg.data.num_clips);
    for (int i = 0; i < cfg.data.num_clips; ++i) {
        clips.push_back(generate_clip(clip_seed(cfg.seed, 0, i), clip_spec));
    }

    OptimState opt;
    opt.init(model.online);

    const int batch = cfg.train.batch_size;
    const int workers = worker_count(batch);
    std::vector<Replica> replicas(static_cast<std::size_t>(workers));
    for (auto& r : replicas) {
        r.model.cfg = cfg.model;
        r.model.online = model.online.clone(true);
        r.model.target = model.target.clone(false);
    }

    auto write_checkpoint = [&]() {
        save_checkpoint(res.checkpoint_path, cfg_json, model.online, model.target);
    };
    write_checkpoint(); // step-0 state

    std::vector<double> sample_loss(static_cast<std::size_t>(batch));
    std::vector<std::vector<double>> sample_ratios(static_cast<std::size_t>(batch));
    double total_ms = 0.0;

    for (std::int64_t step = 1; step <= cfg.train.total_steps; ++step) {
        const auto t0 = std::chrono::steady_clock::now();
        const double lr = cosine_lr(step, cfg.train.adam.lr0, cfg.train.warmup_steps,
                                    cfg.train.total_steps);

        for (auto& r : replicas) {
            r.model.online.copy_values_from(model.online);
            r.model.target.copy_values_from(model.target);
            r.model.online.zero_grads();
        }

        parallel_chunks(batch, [&](int w, int begin, int end) {
            Replica& rep = replicas[static_cast<std::size_t>(w)];
            for (int s = begin; s < end; ++s) {
                Rng pick(mix_seed(cfg.seed, 0x11, static_cast<std::uint64_t>(step),
                                  static_cast<std::uint64_t>(s)));
                const int ci = std::uniform_int_distribution<int>(0, cfg.data.num_clips - 1)(pick);
                const SyntheticClip& clip = clips[static_cast<std::size_t>(ci)];
                auto [fi, fj] = sample_pair_indices(cfg.data.frame_count, pick);
                Image vi = augment(clip.frames[static_cast<std::size_t>(fi)], cfg.augment,
                                   mix_seed(cfg.seed, 0x21, static_cast<std::uint64_t>(step),
                                            static_cast<std::uint64_t>(2 * s)));
                Image vj = augment(clip.frames[static_cast<std::size_t>(fj)], cfg.augment,
                                   mix_seed(cfg.seed, 0x21, static_cast<std::uint64_t>(step),
                                            static_cast<std::uint64_t>(2 * s + 1)));
                Graph g;
                PairForward pf = siamese_pair_forward(g, rep.model, vi, vj);
                g.backward(pf.loss);
                sample_loss[static_cast<std::size_t>(s)] = pf.pair_loss_value;
                sample_ratios[static_cast<std::size_t>(s)] = pf.token_ratios;
            }
        });

        // merge worker gradients in fixed order, then average over the batch
        for (const auto& name : model.online.names()) {
            TensorPtr dst = model.online.get(name);
            dst->ensure_grad();
            dst->zero_grad();
            for (const auto& rep : replicas) {
                TensorPtr src = rep.model.online.get(name);
                if (src->grad.empty()) continue;
                for (std::size_t i = 0; i < dst->size(); ++i) dst->grad[i] += src->grad[i];
            }
            for (auto& v : dst->grad) v /= batch;
        }

        double loss = 0.0;
        for (double v : sample_loss) loss += v;
        loss /= batch;
        if (std::isnan(loss)) {
            throw std::runtime_error("NaN loss at step " + std::to_string(step) +
                                     "; last checkpoint retained at " + res.checkpoint_path);
        }
        std::vector<double> ratios(n_pos, 1.0);
        if (n_pos > 0 && cfg.model.asc_enabled) {
            std::vector<double> acc(n_pos, 0.0);
            for (const auto& sr : sample_ratios)
                for (std::size_t i = 0; i < n_pos && i < sr.size(); ++i) acc[i] += sr[i];
            for (std::size_t i = 0; i < n_pos; ++i) ratios[i] = acc[i] / batch;
        }

        adam_step(model.online, opt, lr, cfg.train.adam);
        ema_update(model, cfg.train.ema_momentum);

        std::vector<double> thetas(n_pos);
        for (std::size_t i = 0; i < n_pos; ++i) {
            thetas[i] = model.online.get("enc.theta" + std::to_string(i))->data[0];
        }

        metrics << step << "," << fmt(loss) << "," << fmt(lr);
        for (double t : thetas) metrics << "," << fmt(t);
        for (double r : ratios) metrics << "," << fmt(r);
        metrics << "\n";

        res.losses.push_back(loss);
        res.theta_log.push_back(thetas);
        res.ratio_log.push_back(ratios);

        if (cfg.train.checkpoint_every > 0 && step % cfg.train.checkpoint_every == 0) {
            write_checkpoint();
        }
        total_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                        .count();
    }

    write_checkpoint();
    metrics.close();
    if (cfg.train.total_steps > 0) res.mean_step_ms = total_ms / cfg.train.total_steps;
    return res;
}

TrainResult run_training(const RunConfig& cfg) {
    SiameseModel model;
    return run_training(cfg, model);
}

} // namespace asc
