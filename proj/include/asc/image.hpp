#pragma once

#include <string>
#include <vector>

namespace asc {

// RGB image, row-major, channel-interleaved, values in [0,1].
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> values; // height * width * 3

    Image() = default;
    Image(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w * 3, 0.0) {}

    double& at(int y, int x, int c) {
        return values[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    double at(int y, int x, int c) const {
        return values[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
};

// Binary PPM (P6), 8-bit. Loading normalizes to [0,1]; saving clamps.
Image load_ppm(const std::string& path);
void save_ppm(const Image& img, const std::string& path);

// Raw 8-bit RGB buffer (e.g. a decoded PNG) to [0,1] floats.
Image image_from_u8(const unsigned char* rgb, int height, int width);

} // namespace asc
