#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wmark/errors.hpp"
#include "wmark/plane.hpp"

namespace wmark {

// 8-bit interleaved raster, 1 (gray) or 3 (RGB) channels, row-major.
struct RasterImage {
    std::size_t width = 0;
    std::size_t height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data; // width*height*channels samples

    RasterImage() = default;
    RasterImage(std::size_t w, std::size_t h, int ch, std::uint8_t fill = 0)
        : width(w), height(h), channels(ch), data(w * h * ch, fill) {}

    std::uint8_t& at(std::size_t r, std::size_t c, int ch = 0) {
        return data[(r * width + c) * channels + ch];
    }
    std::uint8_t at(std::size_t r, std::size_t c, int ch = 0) const {
        return data[(r * width + c) * channels + ch];
    }
    std::size_t pixel_count() const { return width * height; }
    std::size_t sample_count() const { return data.size(); }
};

struct YCbCrPlanes {
    Plane y;
    Plane cb;
    Plane cr;
};

// BT.601 full-range conversion of a 3-channel image into double planes.
// Throws ConstraintError("channel mismatch") on single-channel input.
YCbCrPlanes rgb_to_ycbcr(const RasterImage& img);

// Inverse conversion; each channel is floor(x+0.5)-rounded and clamped to
// [0,255]. Throws ConstraintError("shape mismatch") if plane dims differ.
RasterImage ycbcr_to_rgb(const YCbCrPlanes& planes);

// Luminance of one pixel per the 0.299/0.587/0.114 weighting, rounded.
int luma_u8(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Unrounded double luminance plane of a gray or RGB image.
Plane luminance_plane(const RasterImage& img);

// Gray image from a double plane (rounded, clamped).
RasterImage plane_to_gray(const Plane& p);

// File I/O; format chosen by extension (.png, .bmp, .jpg/.jpeg).
// PNG/BMP are lossless; JPEG writes at `jpeg_quality`. Alpha channels are
// stripped on load with a warning on stderr; palette and 16-bit PNG inputs
// are normalized to 8-bit gray/RGB.
RasterImage load_image(const std::string& path);
void save_image(const RasterImage& img, const std::string& path,
                int jpeg_quality = 90);

} // namespace wmark
