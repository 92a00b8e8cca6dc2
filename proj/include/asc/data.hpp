#pragma once

// Deterministic synthetic-video generation and the augmentation pipeline
// that produces positive frame pairs.

#include "asc/image.hpp"
#include "asc/rng.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace asc {

enum class ShapeKind { Circle = 0, Square = 1, Triangle = 2 };
constexpr int kNumShapeClasses = 3;

struct SyntheticClip {
    std::vector<Image> frames;
    ShapeKind kind = ShapeKind::Circle;
    int label = 0; // class = shape kind
    std::uint64_t seed = 0;
};

struct ClipSpec {
    int frame_count = 8;
    int size = 32;
    double velocity_scale = 1.5; // pixels per frame, 0 freezes the motif
};

// A colored shape translating at constant velocity over a textured
// background. Fully determined by (seed, spec).
SyntheticClip generate_clip(std::uint64_t seed, const ClipSpec& spec);

// Four equal temporal segments, one uniform index drawn per segment; the
// frames from the first and last segment form the training pair.
std::pair<int, int> sample_pair_indices(int frame_count, Rng& rng);

struct AugmentConfig {
    double crop_scale_min = 0.2;
    double crop_scale_max = 1.0;
    double flip_prob = 0.5;
    double brightness = 0.4;
    double contrast = 0.4;
    double saturation = 0.4;
    double hue = 0.1;
    double grayscale_prob = 0.2;
    double blur_sigma = 0.5;
    int output_size = 32;

    void validate() const;
};

// crop -> flip -> color jitter -> grayscale -> blur, clamped to [0,1].
Image augment(const Image& img, const AugmentConfig& cfg, std::uint64_t seed);

// Individual stages, exposed for direct testing.
Image random_resized_crop(const Image& img, double scale_min, double scale_max,
                          int output_size, Rng& rng);
Image horizontal_flip(const Image& img);
Image color_jitter(const Image& img, const AugmentConfig& cfg, Rng& rng);
Image to_grayscale(const Image& img);
Image gaussian_blur(const Image& img, double sigma);

// Numbered PPM frames for inspection: <dir>/frame_000.ppm etc.
void export_clip(const SyntheticClip& clip, const std::string& dir);

} // namespace asc
