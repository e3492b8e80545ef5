#include "wmark/image.hpp"

#include <cmath>

#include "wmark/kernels.hpp"

namespace wmark {

YCbCrPlanes rgb_to_ycbcr(const RasterImage& img) {
    if (img.channels != 3)
        throw ConstraintError("channel mismatch: expected 3-channel image, got " +
                              std::to_string(img.channels));
    YCbCrPlanes out;
    out.y = Plane(img.height, img.width);
    out.cb = Plane(img.height, img.width);
    out.cr = Plane(img.height, img.width);
    kernels::ycbcr_from_rgb(img.data.data(), out.y.v.data(), out.cb.v.data(),
                            out.cr.v.data(), img.pixel_count());
    return out;
}

RasterImage ycbcr_to_rgb(const YCbCrPlanes& planes) {
    if (!planes.y.same_dims(planes.cb) || !planes.y.same_dims(planes.cr))
        throw ConstraintError("shape mismatch: Y/Cb/Cr plane dims differ");
    RasterImage img(planes.y.width, planes.y.height, 3);
    kernels::rgb_from_ycbcr(planes.y.v.data(), planes.cb.v.data(),
                            planes.cr.v.data(), img.data.data(),
                            img.pixel_count());
    return img;
}

int luma_u8(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return static_cast<int>(std::floor(y + 0.5));
}

Plane luminance_plane(const RasterImage& img) {
    Plane p(img.height, img.width);
    if (img.channels == 1) {
        for (std::size_t i = 0; i < img.pixel_count(); ++i)
            p.v[i] = img.data[i];
    } else {
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            const std::uint8_t* px = img.data.data() + 3 * i;
            p.v[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        }
    }
    return p;
}

RasterImage plane_to_gray(const Plane& p) {
    RasterImage img(p.width, p.height, 1);
    for (std::size_t i = 0; i < p.count(); ++i) {
        double v = std::floor(p.v[i] + 0.5);
        v = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
        img.data[i] = static_cast<std::uint8_t>(v);
    }
    return img;
}

} // namespace wmark
