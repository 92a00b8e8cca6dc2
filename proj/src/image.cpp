#include "asc/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace asc {

Image load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P6" || maxval != 255 || w <= 0 || h <= 0) {
        throw std::runtime_error("unsupported PPM format in " + path);
    }
    in.get(); // single whitespace after header
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw std::runtime_error("truncated PPM data in " + path);
    return image_from_u8(raw.data(), h, w);
}

void save_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> raw(img.values.size());
    for (std::size_t i = 0; i < img.values.size(); ++i) {
        double v = std::clamp(img.values[i], 0.0, 1.0);
        raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw std::runtime_error("short write to " + path);
}

Image image_from_u8(const unsigned char* rgb, int height, int width) {
    Image img(height, width);
    const std::size_t n = static_cast<std::size_t>(height) * width * 3;
    for (std::size_t i = 0; i < n; ++i) img.values[i] = rgb[i] / 255.0;
    return img;
}

} // namespace asc
