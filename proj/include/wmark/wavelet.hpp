#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wmark/plane.hpp"

namespace wmark {

// Daubechies family selector (dbK has 2K taps) plus decomposition depth.
struct WaveletSpec {
    int family = 3; // db1 .. db8
    int level = 1;  // >= 1
};

// "db3" <-> WaveletSpec; throws ArgumentError on anything else.
WaveletSpec parse_wavelet_name(const std::string& name, int level);
std::string wavelet_name(const WaveletSpec& spec);

// Orthonormal analysis filter pair for dbK. The high-pass filter is the
// alternating-sign reversal of the low-pass one.
std::span<const double> daubechies_lowpass(int family);
std::vector<double> daubechies_highpass(int family);

struct DetailBands {
    Plane lh; // horizontal low, vertical high
    Plane hl; // horizontal high, vertical low
    Plane hh; // diagonal
};

struct Dims {
    std::size_t height = 0;
    std::size_t width = 0;
    bool operator==(const Dims&) const = default;
};

// Multi-level decomposition. details[0] is the coarsest level (same scale as
// ll); details.back() is the finest. original_dims[i] holds the dims of the
// plane consumed by the analysis step that produced details[i].
struct SubbandPyramid {
    Plane ll;
    std::vector<DetailBands> details;
    std::vector<Dims> original_dims;

    std::size_t levels() const { return details.size(); }
};

// Separable periodized wavelet decomposition; each level ceil-halves both
// dims (odd extents are extended by repeating the last sample/row). Throws
// ConstraintError("decomposition too deep") when 2^level exceeds either dim.
SubbandPyramid fwt2(const Plane& plane, const WaveletSpec& spec);

// Exact inverse. Throws ConstraintError("corrupt pyramid") when the dims
// chain is inconsistent.
Plane ifwt2(const SubbandPyramid& pyr, const WaveletSpec& spec);

} // namespace wmark
