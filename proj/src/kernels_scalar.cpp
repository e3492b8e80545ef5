#include "wmark/kernels.hpp"

#include <cmath>
#include <cstddef>

// Reference implementations. The per-output accumulation order defined here
// (taps ascending, low-pass term before high-pass term) is the contract the
// AVX2 variants reproduce exactly.

namespace wmark::kernels::scalar {

void ycbcr_from_rgb(const std::uint8_t* rgb, double* y, double* cb, double* cr,
                    std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        const double r = rgb[3 * i + 0];
        const double g = rgb[3 * i + 1];
        const double b = rgb[3 * i + 2];
        y[i] = 0.299 * r + 0.587 * g + 0.114 * b;
        cb[i] = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
        cr[i] = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
    }
}

void rgb_from_ycbcr(const double* y, const double* cb, const double* cr,
                    std::uint8_t* rgb, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        const double yv = y[i];
        const double cbd = cb[i] - 128.0;
        const double crd = cr[i] - 128.0;
        const double r = yv + 1.402 * crd;
        const double g = yv - 0.344136 * cbd - 0.714136 * crd;
        const double b = yv + 1.772 * cbd;
        // round half up, then clamp
        double rr = std::floor(r + 0.5);
        double rg = std::floor(g + 0.5);
        double rb = std::floor(b + 0.5);
        rr = rr < 0.0 ? 0.0 : (rr > 255.0 ? 255.0 : rr);
        rg = rg < 0.0 ? 0.0 : (rg > 255.0 ? 255.0 : rg);
        rb = rb < 0.0 ? 0.0 : (rb > 255.0 ? 255.0 : rb);
        rgb[3 * i + 0] = static_cast<std::uint8_t>(rr);
        rgb[3 * i + 1] = static_cast<std::uint8_t>(rg);
        rgb[3 * i + 2] = static_cast<std::uint8_t>(rb);
    }
}

void analysis_row(const double* x, std::size_t n, const double* lo,
                  const double* hi, std::size_t taps, double* approx,
                  double* detail) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t base = 2 * i;
        double sa = 0.0;
        double sd = 0.0;
        for (std::size_t k = 0; k < taps; ++k) {
            const double v = x[(base + k) % n];
            sa += lo[k] * v;
            sd += hi[k] * v;
        }
        approx[i] = sa;
        detail[i] = sd;
    }
}

void analysis_cols(const double* x, std::size_t n, std::size_t w,
                   const double* lo, const double* hi, std::size_t taps,
                   double* approx, double* detail) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double* arow = approx + i * w;
        double* drow = detail + i * w;
        for (std::size_t c = 0; c < w; ++c) {
            arow[c] = 0.0;
            drow[c] = 0.0;
        }
        for (std::size_t k = 0; k < taps; ++k) {
            const double* src = x + ((2 * i + k) % n) * w;
            const double lk = lo[k];
            const double hk = hi[k];
            for (std::size_t c = 0; c < w; ++c) {
                arow[c] += lk * src[c];
                drow[c] += hk * src[c];
            }
        }
    }
}

// m(j,k) = ((j-k)/2) mod half for even j-k; division of an even signed value
// by 2 is exact, the mod is then folded non-negative.
static inline std::size_t coef_index(std::size_t j, std::size_t k,
                                     std::size_t half) {
    std::ptrdiff_t m = (static_cast<std::ptrdiff_t>(j) -
                        static_cast<std::ptrdiff_t>(k)) / 2;
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(half);
    m %= h;
    if (m < 0) m += h;
    return static_cast<std::size_t>(m);
}

void synthesis_row(const double* approx, const double* detail, std::size_t n,
                   const double* lo, const double* hi, std::size_t taps,
                   double* x) {
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = j & 1; k < taps; k += 2) {
            const std::size_t m = coef_index(j, k, half);
            s += lo[k] * approx[m];
            s += hi[k] * detail[m];
        }
        x[j] = s;
    }
}

void synthesis_cols(const double* approx, const double* detail, std::size_t n,
                    std::size_t w, const double* lo, const double* hi,
                    std::size_t taps, double* x) {
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        double* xrow = x + j * w;
        for (std::size_t c = 0; c < w; ++c) xrow[c] = 0.0;
        for (std::size_t k = j & 1; k < taps; k += 2) {
            const std::size_t m = coef_index(j, k, half);
            const double* am = approx + m * w;
            const double* dm = detail + m * w;
            const double lk = lo[k];
            const double hk = hi[k];
            for (std::size_t c = 0; c < w; ++c) {
                xrow[c] += lk * am[c];
                xrow[c] += hk * dm[c];
            }
        }
    }
}

void qim_embed(const double* c, const std::uint8_t* bits, std::size_t n,
               double half_alpha, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = c[i] + (bits[i] ? half_alpha : -half_alpha);
}

void qim_extract(const double* marked, const double* original, std::size_t n,
                 std::uint8_t* bits) {
    for (std::size_t i = 0; i < n; ++i)
        bits[i] = (marked[i] - original[i] >= 0.0) ? 1 : 0;
}

std::uint64_t sum_sq_diff_u8(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t n) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        acc += static_cast<std::uint64_t>(d * d);
    }
    return acc;
}

static inline std::size_t mirror(std::ptrdiff_t p, std::size_t len) {
    if (p < 0) p = -p - 1;
    const std::ptrdiff_t l = static_cast<std::ptrdiff_t>(len);
    if (p >= l) p = 2 * l - 1 - p;
    return static_cast<std::size_t>(p);
}

void conv_rows_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst) {
    const std::ptrdiff_t radius = static_cast<std::ptrdiff_t>(ntaps / 2);
    for (std::size_t r = 0; r < h; ++r) {
        const double* srow = src + r * w;
        double* drow = dst + r * w;
        for (std::size_t c = 0; c < w; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < ntaps; ++k) {
                const std::size_t p = mirror(
                    static_cast<std::ptrdiff_t>(c) +
                        static_cast<std::ptrdiff_t>(k) - radius,
                    w);
                s += taps[k] * srow[p];
            }
            drow[c] = s;
        }
    }
}

void conv_cols_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst) {
    const std::ptrdiff_t radius = static_cast<std::ptrdiff_t>(ntaps / 2);
    for (std::size_t r = 0; r < h; ++r) {
        double* drow = dst + r * w;
        for (std::size_t c = 0; c < w; ++c) drow[c] = 0.0;
        for (std::size_t k = 0; k < ntaps; ++k) {
            const std::size_t p = mirror(
                static_cast<std::ptrdiff_t>(r) +
                    static_cast<std::ptrdiff_t>(k) - radius,
                h);
            const double* srow = src + p * w;
            const double tk = taps[k];
            for (std::size_t c = 0; c < w; ++c) drow[c] += tk * srow[c];
        }
    }
}

} // namespace wmark::kernels::scalar
