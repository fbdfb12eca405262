#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace latentforge {

// 8-bit RGB image buffer, row-major, 3 bytes per pixel.
struct RgbImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    RgbImage(std::size_t w, std::size_t h, std::uint8_t fill = 255)
        : width(w), height(h), pixels(w * h * 3, fill) {}

    void set(std::size_t x, std::size_t y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        const std::size_t o = (y * width + x) * 3;
        pixels[o] = r;
        pixels[o + 1] = g;
        pixels[o + 2] = b;
    }
};

// Minimal PNG encoder (stored deflate blocks, CRC-correct chunks); enough for
// lossless scatter and heatmap exports without external dependencies.
void write_png(const RgbImage& image, const std::filesystem::path& path);

// Viridis-style colormap: t in [0,1] -> RGB.
void viridis(double t, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b);

} // namespace latentforge
