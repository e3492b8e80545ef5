#pragma once

#include "wmark/image.hpp"
#include "wmark/plane.hpp"

namespace wmark {

// SSIM window parameters, frozen for reproducibility.
struct MetricConfig {
    static constexpr int ssim_window = 11;
    static constexpr double ssim_sigma = 1.5;
    static constexpr double ssim_k1 = 0.01;
    static constexpr double ssim_k2 = 0.03;
    static constexpr double dynamic_range = 255.0;
};

// Peak signal-to-noise ratio over all samples and channels jointly;
// +infinity for identical images. Throws ConstraintError("shape mismatch").
double psnr(const RasterImage& a, const RasterImage& b);

// Mean structural similarity of the luminance planes, 11x11 Gaussian window
// (sigma 1.5), mirrored boundary so the map covers every pixel. Requires
// both dims >= 11.
double ssim(const RasterImage& a, const RasterImage& b);
double ssim_planes(const Plane& a, const Plane& b);

// Fraction of differing bits.
double ber(const BitMatrix& a, const BitMatrix& b);

// Normalized cross-correlation sum(ab)/(sqrt(sum a^2) sqrt(sum b^2));
// both all-zero -> 1, exactly one all-zero -> 0.
double ncc(const BitMatrix& a, const BitMatrix& b);
double ncc_planes(const Plane& a, const Plane& b);

} // namespace wmark
