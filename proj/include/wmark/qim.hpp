#pragma once

#include <cstdint>

#include "wmark/image.hpp"
#include "wmark/plane.hpp"
#include "wmark/wavelet.hpp"

namespace wmark {

// Side limit on watermark payloads.
inline constexpr std::size_t kMaxWatermarkSide = 128;

struct EmbedConfig {
    double alpha = 0.0;  // quantization step, coefficient units; > 0
    int threshold = 128; // binarization cut, in [1,255]
    WaveletSpec spec;

    void validate() const;
};

// Watermark payload: a binary matrix no larger than 128x128.
using WatermarkBits = BitMatrix;

// Threshold a grayscale watermark (RGB inputs are luminance-reduced first):
// bit = 1 iff sample >= threshold. Throws ConstraintError("watermark too
// large") beyond 128x128.
WatermarkBits binarize(const RasterImage& watermark, int threshold);

// Antipodal shift: c + (2b-1) * alpha/2.
double embed_bit(double c, int bit, double alpha);

// Sign of the marked-minus-original difference; zero reads as 1.
int extract_bit(double c_marked, double c_original);

// Plane-wide variants over coefficient blocks (SIMD-dispatched).
Plane embed_bits(const Plane& coeffs, const BitMatrix& bits, double alpha);
BitMatrix extract_bits(const Plane& marked, const Plane& original);

} // namespace wmark
