// Command-line driver: train / probe / ablate / bench / gradcheck / inspect.
// Exit codes: 0 success, 1 validation or usage error, 2 runtime failure.

#include "asc/checkpoint.hpp"
#include "asc/eval.hpp"
#include "asc/gradcheck_suite.hpp"
#include "asc/trainer.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

asc::RunConfig load_with_overrides(const std::string& config_path, const std::string& seed_str,
                                   const std::string& out_dir) {
    asc::RunConfig cfg = asc::load_run_config(config_path);
    if (!seed_str.empty()) cfg.seed = std::stoull(seed_str);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();
    return cfg;
}

int cmd_train(const asc::RunConfig& cfg) {
    asc::TrainResult res = asc::run_training(cfg);
    std::printf("steps: %zu\n", res.losses.size());
    if (!res.losses.empty()) std::printf("final loss: %.6f\n", res.losses.back());
    std::printf("metrics: %s\ncheckpoint: %s\n", res.metrics_path.c_str(),
                res.checkpoint_path.c_str());
    return 0;
}

int cmd_probe(const asc::RunConfig& cfg, const std::string& ckpt_path) {
    const std::string path = ckpt_path.empty() ? cfg.out_dir + "/checkpoint.asc" : ckpt_path;
    asc::Checkpoint ckpt = asc::load_checkpoint(path);
    asc::SiameseModel model;
    model.cfg = cfg.model;
    model.init(cfg.seed);
    asc::restore_params(model.online, ckpt, "online/");
    asc::restore_params(model.target, ckpt, "target/");
    asc::ProbeResult pr = asc::probe_encoder(cfg, model);
    std::printf("top1: %.4f (train %.4f, %d test samples)\n", pr.top1, pr.train_top1,
                pr.sample_count);
    for (std::size_t c = 0; c < pr.per_class.size(); ++c) {
        std::printf("class %zu: %.4f\n", c, pr.per_class[c]);
    }
    return 0;
}

int cmd_ablate(const asc::RunConfig& cfg, const std::string& seeds_str) {
    std::vector<std::uint64_t> seeds;
    std::size_t pos = 0;
    while (pos < seeds_str.size()) {
        std::size_t next = seeds_str.find(',', pos);
        if (next == std::string::npos) next = seeds_str.size();
        seeds.push_back(std::stoull(seeds_str.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (seeds.empty()) throw std::invalid_argument("ablate: no seeds given");
    const std::string csv = cfg.out_dir + "/ablation.csv";
    auto rows = asc::run_ablation(cfg, asc::ablation_variants(), seeds, csv);
    for (const auto& r : rows) {
        std::printf("%-16s seed %llu  top1 %.4f  tokens_ratio %.4f  %.1f ms/step\n",
                    r.variant.c_str(), static_cast<unsigned long long>(r.seed), r.probe_top1,
                    r.mean_tokens_ratio, r.ms_per_step);
    }
    std::printf("report: %s\n", csv.c_str());
    return 0;
}

int cmd_bench(const std::string& out_path, int d, std::uint64_t seed) {
    const std::vector<double> thetas{-0.5, 0.0, 0.25, 0.5, 0.75, 1.5};
    const std::vector<int> ns{16, 32, 64, 128};
    auto rows = asc::bench_tokens(thetas, ns, d, seed, out_path);
    for (const auto& r : rows) {
        std::printf("theta %6.2f  N %4d -> %4d tokens  attn %lld  overhead %lld  ops %lld\n",
                    r.theta, r.n, r.n_out, static_cast<long long>(r.attn_cost),
                    static_cast<long long>(r.overhead_cost),
                    static_cast<long long>(r.measured_ops));
    }
    std::printf("report: %s\n", out_path.c_str());
    return 0;
}

int cmd_gradcheck(std::uint64_t seed) {
    auto entries = asc::run_gradient_suite(seed);
    for (const auto& e : entries) {
        std::printf("%-24s max rel err %.3e (tol %.0e) %s\n", e.name.c_str(), e.max_err,
                    e.tolerance, e.passed ? "ok" : "FAIL");
    }
    if (!asc::all_passed(entries)) {
        std::fprintf(stderr, "gradient check failed\n");
        return 2;
    }
    return 0;
}

int cmd_inspect(const std::string& path) {
    asc::Checkpoint ckpt = asc::load_checkpoint(path);
    std::printf("config: %s\n", ckpt.config_json.c_str());
    for (const auto& rec : ckpt.records) {
        std::string shape;
        for (std::size_t i = 0; i < rec.extents.size(); ++i) {
            shape += (i ? "x" : "") + std::to_string(rec.extents[i]);
        }
        std::printf("%-32s %s\n", rec.name.c_str(), shape.c_str());
    }
    for (const auto& rec : ckpt.records) {
        if (rec.name.find("theta") != std::string::npos && rec.values.size() == 1) {
            std::printf("%s = %.17g\n", rec.name.c_str(), rec.values[0]);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"token-grouping transformer: training and evaluation driver"};
    app.require_subcommand(1);

    std::string config_path, seed_str, out_dir, ckpt_path, seeds_str = "0,1,2";
    std::string bench_out = "bench.csv";
    int bench_d = 16;
    std::uint64_t tool_seed = 0;

    CLI::App* train = app.add_subcommand("train", "run self-supervised training");
    train->add_option("--config", config_path, "JSON run config")->required();
    train->add_option("--seed", seed_str, "override run seed");
    train->add_option("--out", out_dir, "override output directory");

    CLI::App* probe = app.add_subcommand("probe", "linear probe on frozen features");
    probe->add_option("--config", config_path, "JSON run config")->required();
    probe->add_option("--checkpoint", ckpt_path, "checkpoint path (default <out>/checkpoint.asc)");
    probe->add_option("--seed", seed_str, "override run seed");
    probe->add_option("--out", out_dir, "override output directory");

    CLI::App* ablate = app.add_subcommand("ablate", "run the ablation grid");
    ablate->add_option("--config", config_path, "JSON run config")->required();
    ablate->add_option("--seeds", seeds_str, "comma-separated seeds (default 0,1,2)");
    ablate->add_option("--out", out_dir, "override output directory");

    CLI::App* bench = app.add_subcommand("bench", "token-count and cost sweep");
    bench->add_option("--out", bench_out, "output CSV path");
    bench->add_option("--dim", bench_d, "token width");
    bench->add_option("--seed", tool_seed, "input seed");

    CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient suite");
    gradcheck->add_option("--seed", tool_seed, "suite seed");

    std::string inspect_path;
    CLI::App* inspect = app.add_subcommand("inspect", "print checkpoint contents");
    inspect->add_option("checkpoint", inspect_path, "checkpoint file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*train) return cmd_train(load_with_overrides(config_path, seed_str, out_dir));
        if (*probe) return cmd_probe(load_with_overrides(config_path, seed_str, out_dir), ckpt_path);
        if (*ablate) return cmd_ablate(load_with_overrides(config_path, seed_str, out_dir), seeds_str);
        if (*bench) return cmd_bench(bench_out, bench_d, tool_seed);
        if (*gradcheck) return cmd_gradcheck(tool_seed);
        if (*inspect) return cmd_inspect(inspect_path);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
