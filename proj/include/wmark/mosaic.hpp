#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wmark/plane.hpp"
#include "wmark/qim.hpp"

namespace wmark {

// Watermark bits tiled modularly to cover a coefficient plane; partial tiles
// at the right/bottom edges are truncated.
struct Mosaic {
    BitMatrix bits;                          // dims match the target plane
    std::pair<std::size_t, std::size_t> tile_dims; // (th, tw)
    std::pair<std::size_t, std::size_t> grid;      // ceil(H/th), ceil(W/tw)
};

// Scores of the complete tiles of a recovered bit plane. With a reference,
// `ncc` is each tile's correlation against it and `ssim` a diagnostic on
// {0,255} renderings (NaN when the tile is smaller than the SSIM window).
// Without a reference, `ncc` holds each tile's mean pairwise correlation to
// the other complete tiles and `ssim` is NaN.
struct TileReport {
    std::size_t tile_rows = 0; // complete tiles only
    std::size_t tile_cols = 0;
    std::vector<double> ncc;  // row-major, tile_rows x tile_cols
    std::vector<double> ssim;
    std::pair<std::size_t, std::size_t> best_tile_index{0, 0};
    WatermarkBits best_tile_bits;
};

// Modular tiling of `wm` over an ll_h x ll_w plane. Throws
// ConstraintError("insufficient capacity") when the plane is smaller than
// the watermark.
Mosaic build_mosaic(const WatermarkBits& wm, std::size_t ll_h,
                    std::size_t ll_w);

// Splits `recovered` into complete th x tw tiles and selects the best one:
// highest NCC against `reference` when present, otherwise highest mean
// pairwise NCC. Ties break to the smallest (row, col) in row-major order.
TileReport split_and_score(const BitMatrix& recovered, std::size_t th,
                           std::size_t tw,
                           const std::optional<WatermarkBits>& reference);

} // namespace wmark
