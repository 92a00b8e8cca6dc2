#include "asc/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace asc {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument("config section " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw std::invalid_argument("unknown config key " + where + "." + it.key());
        }
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::string merge_mode_name(MergeMode m) {
    switch (m) {
    case MergeMode::Mean: return "mean";
    case MergeMode::Max: return "max";
    case MergeMode::Tome: return "tome";
    }
    return "mean";
}

MergeMode merge_mode_from(const std::string& s) {
    if (s == "mean") return MergeMode::Mean;
    if (s == "max") return MergeMode::Max;
    if (s == "tome") return MergeMode::Tome;
    throw std::invalid_argument("unknown merge_mode '" + s + "'");
}

} // namespace

void TrainConfig::validate() const {
    if (adam.lr0 <= 0.0 || adam.eps <= 0.0) throw std::invalid_argument("rates must be positive");
    if (batch_size <= 0 || total_steps < 0) throw std::invalid_argument("bad training sizes");
    if (warmup_steps >= total_steps && total_steps > 0) {
        throw std::invalid_argument("warmup steps must be below total steps");
    }
    if (ema_momentum < 0.0 || ema_momentum >= 1.0) {
        throw std::invalid_argument("ema momentum must be in [0,1)");
    }
}

void RunConfig::validate() const {
    model.validate();
    train.validate();
    augment.validate();
    if (augment.output_size != model.image_size) {
        throw std::invalid_argument("augment.output_size must equal model.image_size");
    }
    if (data.frame_count < 4) throw std::invalid_argument("clips need at least 4 frames");
    if (data.num_clips <= 0 || probe.num_train <= 0 || probe.num_test <= 0) {
        throw std::invalid_argument("dataset sizes must be positive");
    }
}

json to_json(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;

    json m;
    m["depth"] = cfg.model.depth;
    m["embed_dim"] = cfg.model.embed_dim;
    m["heads"] = cfg.model.heads;
    m["mlp_ratio"] = cfg.model.mlp_ratio;
    m["patch_size"] = cfg.model.patch_size;
    m["image_size"] = cfg.model.image_size;
    m["use_positional"] = cfg.model.use_positional;
    m["asc_enabled"] = cfg.model.asc_enabled;
    m["asc_positions"] = cfg.model.asc_positions;
    m["theta_init"] = cfg.model.theta_init;
    m["learnable_theta"] = cfg.model.learnable_theta;
    m["edge_cut"] = cfg.model.edge_cut;
    m["surrogate_lambda"] = cfg.model.surrogate_lambda;
    m["affinity_source"] = cfg.model.affinity_source == AffinitySource::Keys ? "keys" : "tokens";
    m["merge_mode"] = merge_mode_name(cfg.model.merge_mode);
    m["tome_r"] = cfg.model.tome_r;
    j["model"] = m;

    json t;
    t["lr"] = cfg.train.adam.lr0;
    t["weight_decay"] = cfg.train.adam.weight_decay;
    t["beta1"] = cfg.train.adam.beta1;
    t["beta2"] = cfg.train.adam.beta2;
    t["eps"] = cfg.train.adam.eps;
    t["batch_size"] = cfg.train.batch_size;
    t["total_steps"] = cfg.train.total_steps;
    t["warmup_steps"] = cfg.train.warmup_steps;
    t["ema_momentum"] = cfg.train.ema_momentum;
    t["checkpoint_every"] = cfg.train.checkpoint_every;
    j["train"] = t;

    json d;
    d["num_clips"] = cfg.data.num_clips;
    d["frame_count"] = cfg.data.frame_count;
    d["velocity_scale"] = cfg.data.velocity_scale;
    j["data"] = d;

    json a;
    a["crop_scale_min"] = cfg.augment.crop_scale_min;
    a["crop_scale_max"] = cfg.augment.crop_scale_max;
    a["flip_prob"] = cfg.augment.flip_prob;
    a["brightness"] = cfg.augment.brightness;
    a["contrast"] = cfg.augment.contrast;
    a["saturation"] = cfg.augment.saturation;
    a["hue"] = cfg.augment.hue;
    a["grayscale_prob"] = cfg.augment.grayscale_prob;
    a["blur_sigma"] = cfg.augment.blur_sigma;
    a["output_size"] = cfg.augment.output_size;
    j["augment"] = a;

    json p;
    p["epochs"] = cfg.probe.epochs;
    p["lr"] = cfg.probe.lr;
    p["momentum"] = cfg.probe.momentum;
    p["num_train"] = cfg.probe.num_train;
    p["num_test"] = cfg.probe.num_test;
    j["probe"] = p;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    check_keys(j, {"seed", "out_dir", "model", "train", "data", "augment", "probe"}, "$");
    RunConfig cfg;
    get_if(j, "seed", cfg.seed);
    get_if(j, "out_dir", cfg.out_dir);

    if (j.contains("model")) {
        const json& m = j.at("model");
        check_keys(m,
                   {"depth", "embed_dim", "heads", "mlp_ratio", "patch_size", "image_size",
                    "use_positional", "asc_enabled", "asc_positions", "theta_init",
                    "learnable_theta", "edge_cut", "surrogate_lambda", "affinity_source",
                    "merge_mode", "tome_r"},
                   "model");
        get_if(m, "depth", cfg.model.depth);
        get_if(m, "embed_dim", cfg.model.embed_dim);
        get_if(m, "heads", cfg.model.heads);
        get_if(m, "mlp_ratio", cfg.model.mlp_ratio);
        get_if(m, "patch_size", cfg.model.patch_size);
        get_if(m, "image_size", cfg.model.image_size);
        get_if(m, "use_positional", cfg.model.use_positional);
        get_if(m, "asc_enabled", cfg.model.asc_enabled);
        get_if(m, "asc_positions", cfg.model.asc_positions);
        get_if(m, "theta_init", cfg.model.theta_init);
        get_if(m, "learnable_theta", cfg.model.learnable_theta);
        get_if(m, "edge_cut", cfg.model.edge_cut);
        get_if(m, "surrogate_lambda", cfg.model.surrogate_lambda);
        if (m.contains("affinity_source")) {
            const std::string s = m.at("affinity_source").get<std::string>();
            if (s == "tokens") {
                cfg.model.affinity_source = AffinitySource::Tokens;
            } else if (s == "keys") {
                cfg.model.affinity_source = AffinitySource::Keys;
            } else {
                throw std::invalid_argument("unknown affinity_source '" + s + "'");
            }
        }
        if (m.contains("merge_mode")) {
            cfg.model.merge_mode = merge_mode_from(m.at("merge_mode").get<std::string>());
        }
        get_if(m, "tome_r", cfg.model.tome_r);
    }

    if (j.contains("train")) {
        const json& t = j.at("train");
        check_keys(t,
                   {"lr", "weight_decay", "beta1", "beta2", "eps", "batch_size", "total_steps",
                    "warmup_steps", "ema_momentum", "checkpoint_every"},
                   "train");
        get_if(t, "lr", cfg.train.adam.lr0);
        get_if(t, "weight_decay", cfg.train.adam.weight_decay);
        get_if(t, "beta1", cfg.train.adam.beta1);
        get_if(t, "beta2", cfg.train.adam.beta2);
        get_if(t, "eps", cfg.train.adam.eps);
        get_if(t, "batch_size", cfg.train.batch_size);
        get_if(t, "total_steps", cfg.train.total_steps);
        get_if(t, "warmup_steps", cfg.train.warmup_steps);
        get_if(t, "ema_momentum", cfg.train.ema_momentum);
        get_if(t, "checkpoint_every", cfg.train.checkpoint_every);
    }

    if (j.contains("data")) {
        const json& d = j.at("data");
        check_keys(d, {"num_clips", "frame_count", "velocity_scale"}, "data");
        get_if(d, "num_clips", cfg.data.num_clips);
        get_if(d, "frame_count", cfg.data.frame_count);
        get_if(d, "velocity_scale", cfg.data.velocity_scale);
    }

    if (j.contains("augment")) {
        const json& a = j.at("augment");
        check_keys(a,
                   {"crop_scale_min", "crop_scale_max", "flip_prob", "brightness", "contrast",
                    "saturation", "hue", "grayscale_prob", "blur_sigma", "output_size"},
                   "augment");
        get_if(a, "crop_scale_min", cfg.augment.crop_scale_min);
        get_if(a, "crop_scale_max", cfg.augment.crop_scale_max);
        get_if(a, "flip_prob", cfg.augment.flip_prob);
        get_if(a, "brightness", cfg.augment.brightness);
        get_if(a, "contrast", cfg.augment.contrast);
        get_if(a, "saturation", cfg.augment.saturation);
        get_if(a, "hue", cfg.augment.hue);
        get_if(a, "grayscale_prob", cfg.augment.grayscale_prob);
        get_if(a, "blur_sigma", cfg.augment.blur_sigma);
        get_if(a, "output_size", cfg.augment.output_size);
    } else {
        cfg.augment.output_size = cfg.model.image_size;
    }

    if (j.contains("probe")) {
        const json& p = j.at("probe");
        check_keys(p, {"epochs", "lr", "momentum", "num_train", "num_test"}, "probe");
        get_if(p, "epochs", cfg.probe.epochs);
        get_if(p, "lr", cfg.probe.lr);
        get_if(p, "momentum", cfg.probe.momentum);
        get_if(p, "num_train", cfg.probe.num_train);
        get_if(p, "num_test", cfg.probe.num_test);
    }

    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

std::string config_string(const RunConfig& cfg) { return to_json(cfg).dump(); }

} // namespace asc
