#include "wmark/mosaic.hpp"

#include <cmath>
#include <limits>

#include "wmark/metrics.hpp"

namespace wmark {

namespace {

BitMatrix cut_tile(const BitMatrix& plane, std::size_t r0, std::size_t c0,
                   std::size_t th, std::size_t tw) {
    BitMatrix tile(th, tw);
    for (std::size_t r = 0; r < th; ++r)
        for (std::size_t c = 0; c < tw; ++c)
            tile.at(r, c) = plane.at(r0 + r, c0 + c);
    return tile;
}

Plane render_bits(const BitMatrix& bits) {
    Plane p(bits.height, bits.width);
    for (std::size_t i = 0; i < bits.count(); ++i)
        p.v[i] = bits.bits[i] ? 255.0 : 0.0;
    return p;
}

} // namespace

Mosaic build_mosaic(const WatermarkBits& wm, std::size_t ll_h,
                    std::size_t ll_w) {
    if (wm.height == 0 || wm.width == 0)
        throw ConstraintError("insufficient capacity: empty watermark");
    if (ll_h < wm.height || ll_w < wm.width)
        throw ConstraintError(
            "insufficient capacity: coefficient plane " +
            std::to_string(ll_h) + "x" + std::to_string(ll_w) +
            " smaller than watermark " + std::to_string(wm.height) + "x" +
            std::to_string(wm.width) +
            " (use a lower level or a smaller watermark)");
    Mosaic m;
    m.tile_dims = {wm.height, wm.width};
    m.grid = {(ll_h + wm.height - 1) / wm.height,
              (ll_w + wm.width - 1) / wm.width};
    m.bits = BitMatrix(ll_h, ll_w);
    for (std::size_t r = 0; r < ll_h; ++r) {
        const std::uint8_t* src = wm.bits.data() + (r % wm.height) * wm.width;
        std::uint8_t* dst = m.bits.bits.data() + r * ll_w;
        for (std::size_t c = 0; c < ll_w; ++c) dst[c] = src[c % wm.width];
    }
    return m;
}

TileReport split_and_score(const BitMatrix& recovered, std::size_t th,
                           std::size_t tw,
                           const std::optional<WatermarkBits>& reference) {
    if (th == 0 || tw == 0)
        throw ConstraintError("insufficient capacity: empty tile dims");
    const std::size_t rows = recovered.height / th;
    const std::size_t cols = recovered.width / tw;
    if (rows == 0 || cols == 0)
        throw ConstraintError("insufficient capacity: no complete tile fits");
    if (reference && (reference->height != th || reference->width != tw))
        throw ConstraintError("shape mismatch: reference dims != tile dims");

    std::vector<WatermarkBits> tiles;
    tiles.reserve(rows * cols);
    for (std::size_t tr = 0; tr < rows; ++tr)
        for (std::size_t tc = 0; tc < cols; ++tc)
            tiles.push_back(cut_tile(recovered, tr * th, tc * tw, th, tw));

    TileReport report;
    report.tile_rows = rows;
    report.tile_cols = cols;
    report.ncc.resize(tiles.size());
    report.ssim.assign(tiles.size(),
                       std::numeric_limits<double>::quiet_NaN());

    if (reference) {
        const bool can_ssim = th >= MetricConfig::ssim_window &&
                              tw >= MetricConfig::ssim_window;
        const Plane ref_render = render_bits(*reference);
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            report.ncc[i] = ncc(tiles[i], *reference);
            if (can_ssim)
                report.ssim[i] = ssim_planes(render_bits(tiles[i]), ref_render);
        }
    } else {
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            double total = 0.0;
            for (std::size_t j = 0; j < tiles.size(); ++j) {
                if (j == i) continue;
                total += ncc(tiles[i], tiles[j]);
            }
            report.ncc[i] = tiles.size() > 1
                                ? total / static_cast<double>(tiles.size() - 1)
                                : 1.0;
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < tiles.size(); ++i)
        if (report.ncc[i] > report.ncc[best]) best = i; // ties keep row-major first
    report.best_tile_index = {best / cols, best % cols};
    report.best_tile_bits = std::move(tiles[best]);
    return report;
}

} // namespace wmark
