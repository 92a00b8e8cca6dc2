#include "asc/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace asc {
namespace {

constexpr double kLumR = 0.299, kLumG = 0.587, kLumB = 0.114;

double luminance(double r, double g, double b) {
    return kLumR * r + kLumG * g + kLumB * b;
}

// shortest wrapped offset in a periodic field of the given extent
double wrapped_delta(double a, double b, int extent) {
    double d = std::fmod(a - b, static_cast<double>(extent));
    if (d < -extent / 2.0) d += extent;
    if (d >= extent / 2.0) d -= extent;
    return d;
}

bool inside_shape(ShapeKind kind, double dx, double dy, double r) {
    switch (kind) {
    case ShapeKind::Circle:
        return dx * dx + dy * dy <= r * r;
    case ShapeKind::Square:
        return std::fabs(dx) <= r && std::fabs(dy) <= r;
    case ShapeKind::Triangle:
        // upward-pointing isoceles triangle inscribed in the 2r box
        return dy >= -r && dy <= r && std::fabs(dx) <= (dy + r) / 2.0;
    }
    return false;
}

double bilinear(const Image& img, double y, double x, int c) {
    const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, img.height - 1);
    const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const double fy = std::clamp(y - y0, 0.0, 1.0);
    const double fx = std::clamp(x - x0, 0.0, 1.0);
    return (1 - fy) * ((1 - fx) * img.at(y0, x0, c) + fx * img.at(y0, x1, c)) +
           fy * ((1 - fx) * img.at(y1, x0, c) + fx * img.at(y1, x1, c));
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    v = mx;
    const double d = mx - mn;
    s = mx == 0.0 ? 0.0 : d / mx;
    if (d == 0.0) {
        h = 0.0;
    } else if (mx == r) {
        h = std::fmod((g - b) / d, 6.0) / 6.0;
    } else if (mx == g) {
        h = ((b - r) / d + 2.0) / 6.0;
    } else {
        h = ((r - g) / d + 4.0) / 6.0;
    }
    if (h < 0.0) h += 1.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    const double hh = std::fmod(h, 1.0) * 6.0;
    const int i = static_cast<int>(hh) % 6;
    const double f = hh - std::floor(hh);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (i) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
    }
}

} // namespace

SyntheticClip generate_clip(std::uint64_t seed, const ClipSpec& spec) {
    if (spec.frame_count < 4) throw std::invalid_argument("clip needs at least 4 frames");
    const int size = spec.size;
    SyntheticClip clip;
    clip.seed = seed;
    clip.kind = static_cast<ShapeKind>(seed % 3);
    clip.label = static_cast<int>(seed % 3);
    Rng rng(mix_seed(seed, 0x5a5a5a5aULL));

    // class-correlated color: each shape kind dominates one channel
    double color[3] = {0.15, 0.15, 0.15};
    color[clip.label] = uniform(rng, 0.75, 0.95);
    const double r = size / 5.0 * uniform(rng, 0.8, 1.2);
    const double cx0 = uniform(rng, 0.0, size);
    const double cy0 = uniform(rng, 0.0, size);
    const double angle = uniform(rng, 0.0, 2.0 * 3.14159265358979323846);
    const double vx = spec.velocity_scale * std::cos(angle);
    const double vy = spec.velocity_scale * std::sin(angle);

    // static textured background: low-frequency waves plus per-pixel noise
    Image background(size, size);
    const double fx = uniform(rng, 0.5, 2.0), fy = uniform(rng, 0.5, 2.0);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double wave =
                0.05 * std::sin(2.0 * 3.14159265 * fx * x / size) +
                0.05 * std::cos(2.0 * 3.14159265 * fy * y / size);
            for (int c = 0; c < 3; ++c) {
                background.at(y, x, c) =
                    std::clamp(0.25 + wave + uniform(rng, -0.03, 0.03), 0.0, 1.0);
            }
        }

    for (int t = 0; t < spec.frame_count; ++t) {
        Image frame = background;
        const double cx = cx0 + vx * t, cy = cy0 + vy * t;
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                const double dx = wrapped_delta(x, cx, size);
                const double dy = wrapped_delta(y, cy, size);
                if (inside_shape(clip.kind, dx, dy, r)) {
                    for (int c = 0; c < 3; ++c) frame.at(y, x, c) = color[c];
                }
            }
        clip.frames.push_back(std::move(frame));
    }
    return clip;
}

std::pair<int, int> sample_pair_indices(int frame_count, Rng& rng) {
    if (frame_count < 4) throw std::invalid_argument("pair sampling needs at least 4 frames");
    int drawn[4];
    for (int k = 0; k < 4; ++k) {
        const int lo = k * frame_count / 4;
        const int hi = (k + 1) * frame_count / 4; // exclusive
        drawn[k] = std::uniform_int_distribution<int>(lo, hi - 1)(rng);
    }
    // first and last segment give the widest temporal gap
    return {drawn[0], drawn[3]};
}

void AugmentConfig::validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(flip_prob) || !prob(grayscale_prob)) {
        throw std::invalid_argument("augment probabilities must be in [0,1]");
    }
    if (crop_scale_min <= 0.0 || crop_scale_max > 1.0 || crop_scale_min > crop_scale_max) {
        throw std::invalid_argument("crop scale range must lie within (0,1]");
    }
    if (output_size <= 0) throw std::invalid_argument("output size must be positive");
}

Image random_resized_crop(const Image& img, double scale_min, double scale_max,
                          int output_size, Rng& rng) {
    const double area_scale = uniform(rng, scale_min, scale_max);
    const int base = std::min(img.height, img.width);
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(area_scale) * base)));
    const int y0 = std::uniform_int_distribution<int>(0, img.height - side)(rng);
    const int x0 = std::uniform_int_distribution<int>(0, img.width - side)(rng);
    Image out(output_size, output_size);
    const double step = static_cast<double>(side) / output_size;
    for (int y = 0; y < output_size; ++y)
        for (int x = 0; x < output_size; ++x)
            for (int c = 0; c < 3; ++c)
                out.at(y, x, c) = bilinear(img, y0 + (y + 0.5) * step - 0.5,
                                           x0 + (x + 0.5) * step - 0.5, c);
    return out;
}

Image horizontal_flip(const Image& img) {
    Image out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y, img.width - 1 - x, c);
    return out;
}

Image color_jitter(const Image& img, const AugmentConfig& cfg, Rng& rng) {
    const double fb = uniform(rng, 1.0 - cfg.brightness, 1.0 + cfg.brightness);
    const double fc = uniform(rng, 1.0 - cfg.contrast, 1.0 + cfg.contrast);
    const double fs = uniform(rng, 1.0 - cfg.saturation, 1.0 + cfg.saturation);
    const double dh = uniform(rng, -cfg.hue, cfg.hue);
    Image out = img;

    for (auto& v : out.values) v = std::clamp(v * fb, 0.0, 1.0);

    double mean = 0.0;
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            mean += luminance(out.at(y, x, 0), out.at(y, x, 1), out.at(y, x, 2));
    mean /= static_cast<double>(out.height) * out.width;
    for (auto& v : out.values) v = std::clamp((v - mean) * fc + mean, 0.0, 1.0);

    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            const double lum = luminance(out.at(y, x, 0), out.at(y, x, 1), out.at(y, x, 2));
            for (int c = 0; c < 3; ++c) {
                out.at(y, x, c) = std::clamp((out.at(y, x, c) - lum) * fs + lum, 0.0, 1.0);
            }
        }

    if (cfg.hue > 0.0) {
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x) {
                double h, s, v;
                rgb_to_hsv(out.at(y, x, 0), out.at(y, x, 1), out.at(y, x, 2), h, s, v);
                h = std::fmod(h + dh + 1.0, 1.0);
                hsv_to_rgb(h, s, v, out.at(y, x, 0), out.at(y, x, 1), out.at(y, x, 2));
            }
    }
    return out;
}

Image to_grayscale(const Image& img) {
    Image out = img;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const double lum = luminance(img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2));
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = lum;
        }
    return out;
}

Image gaussian_blur(const Image& img, double sigma) {
    if (sigma <= 0.0) return img;
    // 23-tap kernel at full resolution, ceil(3*sigma) radius at desk scale
    const int radius = std::min(img.height, img.width) >= 224
                           ? 11
                           : static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    }
    auto pass = [&](const Image& src, bool horizontal) {
        Image dst(src.height, src.width);
        for (int y = 0; y < src.height; ++y)
            for (int x = 0; x < src.width; ++x)
                for (int c = 0; c < 3; ++c) {
                    double acc = 0.0, wsum = 0.0;
                    for (int k = -radius; k <= radius; ++k) {
                        const int yy = horizontal ? y : y + k;
                        const int xx = horizontal ? x + k : x;
                        if (yy < 0 || yy >= src.height || xx < 0 || xx >= src.width) continue;
                        acc += kernel[k + radius] * src.at(yy, xx, c);
                        wsum += kernel[k + radius];
                    }
                    dst.at(y, x, c) = acc / wsum; // boundary-normalized
                }
        return dst;
    };
    return pass(pass(img, true), false);
}

Image augment(const Image& img, const AugmentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(mix_seed(seed, 0xa06e47ULL));
    Image out = random_resized_crop(img, cfg.crop_scale_min, cfg.crop_scale_max,
                                    cfg.output_size, rng);
    if (uniform(rng, 0.0, 1.0) < cfg.flip_prob) out = horizontal_flip(out);
    out = color_jitter(out, cfg, rng);
    if (uniform(rng, 0.0, 1.0) < cfg.grayscale_prob) out = to_grayscale(out);
    out = gaussian_blur(out, cfg.blur_sigma);
    for (auto& v : out.values) v = std::clamp(v, 0.0, 1.0);
    return out;
}

void export_clip(const SyntheticClip& clip, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t t = 0; t < clip.frames.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%03zu.ppm", t);
        save_ppm(clip.frames[t], dir + "/" + name);
    }
}

} // namespace asc
