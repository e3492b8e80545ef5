#pragma once

#include <cstdint>
#include <vector>

#include "wmark/image.hpp"

namespace wmark {

// In-memory baseline JPEG round trip (4:2:0 chroma subsampling for color).
// Shared by file I/O and the compression attack.
std::vector<std::uint8_t> jpeg_encode(const RasterImage& img, int quality);
RasterImage jpeg_decode(const std::vector<std::uint8_t>& bytes);

} // namespace wmark
