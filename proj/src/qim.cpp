#include "wmark/qim.hpp"

#include "wmark/kernels.hpp"

namespace wmark {

void EmbedConfig::validate() const {
    if (!(alpha > 0.0)) throw ArgumentError("alpha must be > 0");
    if (threshold < 1 || threshold > 255)
        throw ArgumentError("threshold must be in [1,255]");
    if (spec.family < 1 || spec.family > 8)
        throw ArgumentError("wavelet family must be db1..db8");
    if (spec.level < 1) throw ArgumentError("decomposition level must be >= 1");
}

WatermarkBits binarize(const RasterImage& watermark, int threshold) {
    if (watermark.width > kMaxWatermarkSide ||
        watermark.height > kMaxWatermarkSide)
        throw ConstraintError(
            "watermark too large: " + std::to_string(watermark.width) + "x" +
            std::to_string(watermark.height) + " exceeds 128x128");
    if (threshold < 1 || threshold > 255)
        throw ArgumentError("threshold must be in [1,255]");

    WatermarkBits bits(watermark.height, watermark.width);
    if (watermark.channels == 1) {
        for (std::size_t i = 0; i < watermark.pixel_count(); ++i)
            bits.bits[i] = watermark.data[i] >= threshold ? 1 : 0;
    } else {
        for (std::size_t i = 0; i < watermark.pixel_count(); ++i) {
            const std::uint8_t* px = watermark.data.data() + 3 * i;
            bits.bits[i] = luma_u8(px[0], px[1], px[2]) >= threshold ? 1 : 0;
        }
    }
    return bits;
}

double embed_bit(double c, int bit, double alpha) {
    return c + (bit ? alpha * 0.5 : -alpha * 0.5);
}

int extract_bit(double c_marked, double c_original) {
    return (c_marked - c_original >= 0.0) ? 1 : 0;
}

Plane embed_bits(const Plane& coeffs, const BitMatrix& bits, double alpha) {
    if (coeffs.height != bits.height || coeffs.width != bits.width)
        throw ConstraintError("shape mismatch: coefficient/bit dims differ");
    Plane out(coeffs.height, coeffs.width);
    kernels::qim_embed(coeffs.v.data(), bits.bits.data(), coeffs.count(),
                       alpha * 0.5, out.v.data());
    return out;
}

BitMatrix extract_bits(const Plane& marked, const Plane& original) {
    if (!marked.same_dims(original))
        throw ConstraintError("shape mismatch: plane dims differ");
    BitMatrix bits(marked.height, marked.width);
    kernels::qim_extract(marked.v.data(), original.v.data(), marked.count(),
                         bits.bits.data());
    return bits;
}

} // namespace wmark
