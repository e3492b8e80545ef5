#pragma once

#include <optional>

#include "wmark/image.hpp"
#include "wmark/mosaic.hpp"
#include "wmark/qim.hpp"

namespace wmark {

struct EmbedResult {
    RasterImage watermarked;
    double psnr_db = 0.0;
    double ssim = 0.0;
    double embed_seconds = 0.0;
    EmbedConfig config_used;
};

struct ExtractResult {
    BitMatrix recovered_bits; // full mosaic-sized bit plane
    TileReport tile_report;
    double ber = 0.0; // vs the binarized reference; NaN when absent
    double ncc = 0.0;
    double extract_seconds = 0.0;
};

// Optional overrides on top of resolve_defaults.
struct PartialConfig {
    std::optional<double> alpha;
    std::optional<int> level;
    std::optional<int> family;
    std::optional<int> threshold;
};

// True when every sample is 0 or 255 (QR-style payloads).
bool is_binary_image(const RasterImage& img);

// Fills unset fields: level = clamp(floor(log2(min(H,W) / (2*max(th,tw)))),
// 1, 6); alpha = alpha0 * 2^(level-2) with alpha0 = 25 for binary watermarks
// and 30 otherwise; family db3; threshold 128.
EmbedConfig resolve_defaults(std::size_t host_h, std::size_t host_w,
                             std::size_t wm_h, std::size_t wm_w,
                             bool binary_watermark, const PartialConfig& part);

// Embeds the binarized watermark into the host's luminance LL subband by a
// +-alpha/2 shift per mosaic bit, reconstructs, and scores fidelity against
// the host. Chroma is carried through untouched.
EmbedResult embed(const RasterImage& host, const RasterImage& watermark,
                  const EmbedConfig& cfg);

// Non-blind extraction: decomposes both images, reads bit signs from the LL
// difference, splits the plane into tiles and scores them. `reference`
// (binarized with cfg.threshold) drives tile selection and BER/NCC; without
// it the consensus tile is chosen and ber/ncc are NaN. Throws
// ConstraintError("realign required") when dims differ.
ExtractResult extract(const RasterImage& host, const RasterImage& suspect,
                      const EmbedConfig& cfg, std::size_t wm_h,
                      std::size_t wm_w,
                      const std::optional<RasterImage>& reference);

} // namespace wmark
