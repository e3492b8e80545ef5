#pragma once

#include <cstddef>
#include <vector>

#include "wmark/errors.hpp"

namespace wmark {

// Row-major matrix of double samples. The working representation for
// luminance/chrominance planes and wavelet coefficients.
struct Plane {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> v;

    Plane() = default;
    Plane(std::size_t h, std::size_t w, double fill = 0.0)
        : height(h), width(w), v(h * w, fill) {}

    double& at(std::size_t r, std::size_t c) { return v[r * width + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * width + c]; }

    double* row(std::size_t r) { return v.data() + r * width; }
    const double* row(std::size_t r) const { return v.data() + r * width; }

    std::size_t count() const { return height * width; }
    bool same_dims(const Plane& o) const {
        return height == o.height && width == o.width;
    }
};

// Binary matrix with entries in {0,1}, stored one byte per bit.
struct BitMatrix {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> bits;

    BitMatrix() = default;
    BitMatrix(std::size_t h, std::size_t w, std::uint8_t fill = 0)
        : height(h), width(w), bits(h * w, fill) {}

    std::uint8_t& at(std::size_t r, std::size_t c) { return bits[r * width + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return bits[r * width + c]; }

    std::size_t count() const { return height * width; }
    bool same_dims(const BitMatrix& o) const {
        return height == o.height && width == o.width;
    }
};

} // namespace wmark
