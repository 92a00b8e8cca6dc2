#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asc/data.hpp"

#include <cmath>
#include <filesystem>

using namespace asc;

TEST_CASE("clip generation is deterministic and labeled by seed") {
    ClipSpec spec;
    for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 77ULL}) {
        SyntheticClip a = generate_clip(seed, spec);
        SyntheticClip b = generate_clip(seed, spec);
        CHECK(a.label == static_cast<int>(seed % 3));
        CHECK(a.kind == static_cast<ShapeKind>(seed % 3));
        REQUIRE(a.frames.size() == static_cast<std::size_t>(spec.frame_count));
        for (std::size_t f = 0; f < a.frames.size(); ++f) {
            CHECK(a.frames[f].height == spec.size);
            CHECK(a.frames[f].width == spec.size);
            REQUIRE(a.frames[f].values.size() == b.frames[f].values.size());
            for (std::size_t i = 0; i < a.frames[f].values.size(); ++i) {
                CHECK(a.frames[f].values[i] == b.frames[f].values[i]);
            }
        }
    }
}

TEST_CASE("frame values stay inside the unit interval") {
    ClipSpec spec;
    SyntheticClip clip = generate_clip(9, spec);
    for (const Image& frame : clip.frames) {
        for (double v : frame.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("the motif moves between frames unless velocity is zero") {
    ClipSpec spec;
    SyntheticClip moving = generate_clip(5, spec);
    double diff = 0.0;
    for (std::size_t i = 0; i < moving.frames[0].values.size(); ++i) {
        diff += std::fabs(moving.frames[0].values[i] - moving.frames.back().values[i]);
    }
    CHECK(diff > 1.0);

    spec.velocity_scale = 0.0;
    SyntheticClip frozen = generate_clip(5, spec);
    for (std::size_t i = 0; i < frozen.frames[0].values.size(); ++i) {
        CHECK(frozen.frames[0].values[i] == frozen.frames.back().values[i]);
    }
}

TEST_CASE("pair indices come from the first and last temporal segment") {
    Rng rng(21);
    const int frames = 8; // segments of length 2
    int counts[4] = {0, 0, 0, 0};
    for (int t = 0; t < 4000; ++t) {
        auto [i, j] = sample_pair_indices(frames, rng);
        REQUIRE(i >= 0);
        REQUIRE(i < 2);
        REQUIRE(j >= 6);
        REQUIRE(j < 8);
        ++counts[i];
        ++counts[2 + (j - 6)];
    }
    // chi-square against uniform within each segment, 1 dof, alpha ~ 1e-3
    const double e = 2000.0;
    const double chi_first = (counts[0] - e) * (counts[0] - e) / e + (counts[1] - e) * (counts[1] - e) / e;
    const double chi_last = (counts[2] - e) * (counts[2] - e) / e + (counts[3] - e) * (counts[3] - e) / e;
    CHECK(chi_first < 10.83);
    CHECK(chi_last < 10.83);
}

TEST_CASE("augmentation is deterministic in the seed and bounded") {
    ClipSpec spec;
    SyntheticClip clip = generate_clip(30, spec);
    AugmentConfig cfg;
    Image a = augment(clip.frames[0], cfg, 123);
    Image b = augment(clip.frames[0], cfg, 123);
    Image c = augment(clip.frames[0], cfg, 124);
    CHECK(a.height == cfg.output_size);
    CHECK(a.width == cfg.output_size);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) diff += std::fabs(a.values[i] - c.values[i]);
    CHECK(diff > 0.0); // different seed, different view
    for (double v : a.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("horizontal flip is an involution") {
    ClipSpec spec;
    SyntheticClip clip = generate_clip(31, spec);
    Image once = horizontal_flip(clip.frames[0]);
    Image twice = horizontal_flip(once);
    for (std::size_t i = 0; i < twice.values.size(); ++i) {
        CHECK(twice.values[i] == clip.frames[0].values[i]);
    }
}

TEST_CASE("grayscale equalizes the channels") {
    ClipSpec spec;
    SyntheticClip clip = generate_clip(32, spec);
    Image gray = to_grayscale(clip.frames[0]);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            CHECK(gray.at(y, x, 0) == doctest::Approx(gray.at(y, x, 1)));
            CHECK(gray.at(y, x, 1) == doctest::Approx(gray.at(y, x, 2)));
        }
    }
}

TEST_CASE("blur preserves the mean and shrinks variance") {
    ClipSpec spec;
    SyntheticClip clip = generate_clip(33, spec);
    const Image& src = clip.frames[0];
    Image blurred = gaussian_blur(src, 0.5);
    auto stats = [](const Image& img) {
        double mean = 0.0, var = 0.0;
        for (double v : img.values) mean += v;
        mean /= img.values.size();
        for (double v : img.values) var += (v - mean) * (v - mean);
        return std::pair<double, double>(mean, var / img.values.size());
    };
    auto [m0, v0] = stats(src);
    auto [m1, v1] = stats(blurred);
    CHECK(m1 == doctest::Approx(m0).epsilon(0.02));
    CHECK(v1 <= v0);
}

TEST_CASE("crop respects the output size") {
    ClipSpec spec;
    SyntheticClip clip = generate_clip(34, spec);
    Rng rng(99);
    Image cropped = random_resized_crop(clip.frames[0], 0.2, 1.0, 24, rng);
    CHECK(cropped.height == 24);
    CHECK(cropped.width == 24);
}

TEST_CASE("augment config validation") {
    AugmentConfig cfg;
    cfg.crop_scale_min = 0.0;
    CHECK_THROWS(cfg.validate());
    cfg = AugmentConfig{};
    cfg.flip_prob = 1.5;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("clip export writes numbered frames") {
    ClipSpec spec;
    spec.frame_count = 4;
    SyntheticClip clip = generate_clip(35, spec);
    const std::string dir = "clip_export_tmp";
    export_clip(clip, dir);
    for (int f = 0; f < 4; ++f) {
        char name[64];
        std::snprintf(name, sizeof(name), "%s/frame_%03d.ppm", dir.c_str(), f);
        CHECK(std::filesystem::exists(name));
    }
    std::filesystem::remove_all(dir);
}
