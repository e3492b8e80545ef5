#include "wmark/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "wmark/metrics.hpp"
#include "wmark/wavelet.hpp"

namespace wmark {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

bool is_binary_image(const RasterImage& img) {
    for (const std::uint8_t s : img.data)
        if (s != 0 && s != 255) return false;
    return true;
}

EmbedConfig resolve_defaults(std::size_t host_h, std::size_t host_w,
                             std::size_t wm_h, std::size_t wm_w,
                             bool binary_watermark, const PartialConfig& part) {
    EmbedConfig cfg;
    cfg.spec.family = part.family.value_or(3);
    cfg.threshold = part.threshold.value_or(128);

    if (part.level) {
        cfg.spec.level = *part.level;
    } else {
        const double min_dim = static_cast<double>(std::min(host_h, host_w));
        const double max_tile = static_cast<double>(std::max(wm_h, wm_w));
        int lvl = 1;
        if (max_tile > 0 && min_dim > 0) {
            const double ratio = min_dim / (2.0 * max_tile);
            if (ratio >= 1.0)
                lvl = static_cast<int>(std::floor(std::log2(ratio)));
        }
        cfg.spec.level = std::clamp(lvl, 1, 6);
    }

    if (part.alpha) {
        cfg.alpha = *part.alpha;
    } else {
        const double alpha0 = binary_watermark ? 25.0 : 30.0;
        cfg.alpha = alpha0 * std::exp2(cfg.spec.level - 2);
    }
    return cfg;
}

EmbedResult embed(const RasterImage& host, const RasterImage& watermark,
                  const EmbedConfig& cfg) {
    cfg.validate();
    const auto t0 = Clock::now();

    const WatermarkBits bits = binarize(watermark, cfg.threshold);

    EmbedResult res;
    res.config_used = cfg;
    if (host.channels == 3) {
        YCbCrPlanes planes = rgb_to_ycbcr(host);
        SubbandPyramid pyr = fwt2(planes.y, cfg.spec);
        const Mosaic mosaic = build_mosaic(bits, pyr.ll.height, pyr.ll.width);
        pyr.ll = embed_bits(pyr.ll, mosaic.bits, cfg.alpha);
        planes.y = ifwt2(pyr, cfg.spec);
        res.watermarked = ycbcr_to_rgb(planes);
    } else {
        const Plane y = luminance_plane(host);
        SubbandPyramid pyr = fwt2(y, cfg.spec);
        const Mosaic mosaic = build_mosaic(bits, pyr.ll.height, pyr.ll.width);
        pyr.ll = embed_bits(pyr.ll, mosaic.bits, cfg.alpha);
        res.watermarked = plane_to_gray(ifwt2(pyr, cfg.spec));
    }
    res.embed_seconds = seconds_since(t0);

    res.psnr_db = psnr(host, res.watermarked);
    res.ssim = ssim(host, res.watermarked);
    return res;
}

ExtractResult extract(const RasterImage& host, const RasterImage& suspect,
                      const EmbedConfig& cfg, std::size_t wm_h,
                      std::size_t wm_w,
                      const std::optional<RasterImage>& reference) {
    cfg.validate();
    if (host.width != suspect.width || host.height != suspect.height)
        throw ConstraintError(
            "realign required: suspect dims differ from host dims");
    if (host.channels != suspect.channels)
        throw ConstraintError("channel mismatch: host vs suspect");

    std::optional<WatermarkBits> ref_bits;
    if (reference) ref_bits = binarize(*reference, cfg.threshold);

    const auto t0 = Clock::now();
    const Plane y_host = luminance_plane(host);
    const Plane y_suspect = luminance_plane(suspect);
    const SubbandPyramid pyr_host = fwt2(y_host, cfg.spec);
    const SubbandPyramid pyr_suspect = fwt2(y_suspect, cfg.spec);

    ExtractResult res;
    res.recovered_bits = extract_bits(pyr_suspect.ll, pyr_host.ll);
    res.tile_report = split_and_score(res.recovered_bits, wm_h, wm_w, ref_bits);
    res.extract_seconds = seconds_since(t0);

    if (ref_bits) {
        res.ber = ber(res.tile_report.best_tile_bits, *ref_bits);
        res.ncc = ncc(res.tile_report.best_tile_bits, *ref_bits);
    } else {
        res.ber = std::numeric_limits<double>::quiet_NaN();
        res.ncc = std::numeric_limits<double>::quiet_NaN();
    }
    return res;
}

} // namespace wmark
