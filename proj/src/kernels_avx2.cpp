#include "wmark/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <cstring>

// AVX2 variants. Every output element sees the same sequence of multiplies
// and adds as the scalar reference (taps ascending, low-pass before
// high-pass, no FMA), so outputs are bit-identical. Ragged edges and wrap
// regions fall back to the scalar recurrence for single outputs.

namespace wmark::kernels::avx2 {

namespace {

// [e0 e2 e4 e6] from the 8 doubles starting at p.
inline __m256d load_even_stride2(const double* p) {
    const __m256d v0 = _mm256_loadu_pd(p);
    const __m256d v1 = _mm256_loadu_pd(p + 4);
    const __m256d t = _mm256_unpacklo_pd(v0, v1); // e0 e4 e2 e6
    return _mm256_permute4x64_pd(t, 0xD8);        // e0 e2 e4 e6
}

inline void scalar_analysis_one(const double* x, std::size_t n,
                                const double* lo, const double* hi,
                                std::size_t taps, std::size_t i,
                                double* approx, double* detail) {
    const std::size_t base = 2 * i;
    double sa = 0.0, sd = 0.0;
    for (std::size_t k = 0; k < taps; ++k) {
        const double v = x[(base + k) % n];
        sa += lo[k] * v;
        sd += hi[k] * v;
    }
    approx[i] = sa;
    detail[i] = sd;
}

inline std::size_t coef_index(std::size_t j, std::size_t k, std::size_t half) {
    std::ptrdiff_t m = (static_cast<std::ptrdiff_t>(j) -
                        static_cast<std::ptrdiff_t>(k)) / 2;
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(half);
    m %= h;
    if (m < 0) m += h;
    return static_cast<std::size_t>(m);
}

inline double scalar_synthesis_one(const double* approx, const double* detail,
                                   std::size_t n, const double* lo,
                                   const double* hi, std::size_t taps,
                                   std::size_t j) {
    const std::size_t half = n / 2;
    double s = 0.0;
    for (std::size_t k = j & 1; k < taps; k += 2) {
        const std::size_t m = coef_index(j, k, half);
        s += lo[k] * approx[m];
        s += hi[k] * detail[m];
    }
    return s;
}

inline std::size_t mirror(std::ptrdiff_t p, std::size_t len) {
    if (p < 0) p = -p - 1;
    const std::ptrdiff_t l = static_cast<std::ptrdiff_t>(len);
    if (p >= l) p = 2 * l - 1 - p;
    return static_cast<std::size_t>(p);
}

} // namespace

void ycbcr_from_rgb(const std::uint8_t* rgb, double* y, double* cb, double* cr,
                    std::size_t count) {
    const __m128i shuf_r = _mm_setr_epi8(0, -1, -1, -1, 3, -1, -1, -1,
                                         6, -1, -1, -1, 9, -1, -1, -1);
    const __m128i shuf_g = _mm_setr_epi8(1, -1, -1, -1, 4, -1, -1, -1,
                                         7, -1, -1, -1, 10, -1, -1, -1);
    const __m128i shuf_b = _mm_setr_epi8(2, -1, -1, -1, 5, -1, -1, -1,
                                         8, -1, -1, -1, 11, -1, -1, -1);
    const __m256d wyr = _mm256_set1_pd(0.299), wyg = _mm256_set1_pd(0.587),
                  wyb = _mm256_set1_pd(0.114);
    const __m256d c128 = _mm256_set1_pd(128.0);
    const __m256d wbr = _mm256_set1_pd(0.168736), wbg = _mm256_set1_pd(0.331264),
                  wbb = _mm256_set1_pd(0.5);
    const __m256d wrr = _mm256_set1_pd(0.5), wrg = _mm256_set1_pd(0.418688),
                  wrb = _mm256_set1_pd(0.081312);

    std::size_t i = 0;
    // the 16-byte load touches pixels i..i+5
    while (i + 6 <= count) {
        const __m128i px = _mm_loadu_si128(
            reinterpret_cast<const __m128i*>(rgb + 3 * i));
        const __m256d r = _mm256_cvtepi32_pd(_mm_shuffle_epi8(px, shuf_r));
        const __m256d g = _mm256_cvtepi32_pd(_mm_shuffle_epi8(px, shuf_g));
        const __m256d b = _mm256_cvtepi32_pd(_mm_shuffle_epi8(px, shuf_b));

        __m256d yv = _mm256_mul_pd(wyr, r);
        yv = _mm256_add_pd(yv, _mm256_mul_pd(wyg, g));
        yv = _mm256_add_pd(yv, _mm256_mul_pd(wyb, b));

        __m256d cbv = _mm256_sub_pd(c128, _mm256_mul_pd(wbr, r));
        cbv = _mm256_sub_pd(cbv, _mm256_mul_pd(wbg, g));
        cbv = _mm256_add_pd(cbv, _mm256_mul_pd(wbb, b));

        __m256d crv = _mm256_add_pd(c128, _mm256_mul_pd(wrr, r));
        crv = _mm256_sub_pd(crv, _mm256_mul_pd(wrg, g));
        crv = _mm256_sub_pd(crv, _mm256_mul_pd(wrb, b));

        _mm256_storeu_pd(y + i, yv);
        _mm256_storeu_pd(cb + i, cbv);
        _mm256_storeu_pd(cr + i, crv);
        i += 4;
    }
    if (i < count) scalar::ycbcr_from_rgb(rgb + 3 * i, y + i, cb + i, cr + i,
                                          count - i);
}

void rgb_from_ycbcr(const double* y, const double* cb, const double* cr,
                    std::uint8_t* rgb, std::size_t count) {
    const __m256d c128 = _mm256_set1_pd(128.0);
    const __m256d kr = _mm256_set1_pd(1.402);
    const __m256d kgb = _mm256_set1_pd(0.344136), kgr = _mm256_set1_pd(0.714136);
    const __m256d kb = _mm256_set1_pd(1.772);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d v255 = _mm256_set1_pd(255.0);
    // int32 channel values -> interleaved RGB bytes 0..11
    const __m128i pack_r = _mm_setr_epi8(0, -1, -1, 4, -1, -1, 8, -1, -1, 12,
                                         -1, -1, -1, -1, -1, -1);
    const __m128i pack_g = _mm_setr_epi8(-1, 0, -1, -1, 4, -1, -1, 8, -1, -1,
                                         12, -1, -1, -1, -1, -1);
    const __m128i pack_b = _mm_setr_epi8(-1, -1, 0, -1, -1, 4, -1, -1, 8, -1,
                                         -1, 12, -1, -1, -1, -1);

    auto to_u8 = [&](__m256d v) {
        v = _mm256_floor_pd(_mm256_add_pd(v, half));
        v = _mm256_max_pd(v, zero);
        v = _mm256_min_pd(v, v255);
        return _mm256_cvttpd_epi32(v); // integral already
    };

    std::size_t i = 0;
    // the 16-byte store touches pixels i..i+5
    while (i + 6 <= count) {
        const __m256d yv = _mm256_loadu_pd(y + i);
        const __m256d cbd = _mm256_sub_pd(_mm256_loadu_pd(cb + i), c128);
        const __m256d crd = _mm256_sub_pd(_mm256_loadu_pd(cr + i), c128);

        const __m256d r = _mm256_add_pd(yv, _mm256_mul_pd(kr, crd));
        __m256d g = _mm256_sub_pd(yv, _mm256_mul_pd(kgb, cbd));
        g = _mm256_sub_pd(g, _mm256_mul_pd(kgr, crd));
        const __m256d b = _mm256_add_pd(yv, _mm256_mul_pd(kb, cbd));

        const __m128i ri = to_u8(r), gi = to_u8(g), bi = to_u8(b);
        const __m128i bytes = _mm_or_si128(
            _mm_or_si128(_mm_shuffle_epi8(ri, pack_r),
                         _mm_shuffle_epi8(gi, pack_g)),
            _mm_shuffle_epi8(bi, pack_b));
        // trailing 4 bytes are zero; the next iteration or the scalar tail
        // rewrites them
        _mm_storeu_si128(reinterpret_cast<__m128i*>(rgb + 3 * i), bytes);
        i += 4;
    }
    if (i < count) scalar::rgb_from_ycbcr(y + i, cb + i, cr + i, rgb + 3 * i,
                                          count - i);
}

void analysis_row(const double* x, std::size_t n, const double* lo,
                  const double* hi, std::size_t taps, double* approx,
                  double* detail) {
    const std::size_t half = n / 2;
    std::size_t i = 0;
    // vector body needs x[2(i+3) + taps - 1 + 1] readable without wrap
    while (i + 4 <= half && 2 * (i + 3) + taps + 1 <= n) {
        __m256d sa = _mm256_setzero_pd();
        __m256d sd = _mm256_setzero_pd();
        const double* base = x + 2 * i;
        for (std::size_t k = 0; k < taps; ++k) {
            const __m256d v = load_even_stride2(base + k);
            sa = _mm256_add_pd(sa, _mm256_mul_pd(_mm256_set1_pd(lo[k]), v));
            sd = _mm256_add_pd(sd, _mm256_mul_pd(_mm256_set1_pd(hi[k]), v));
        }
        _mm256_storeu_pd(approx + i, sa);
        _mm256_storeu_pd(detail + i, sd);
        i += 4;
    }
    for (; i < half; ++i)
        scalar_analysis_one(x, n, lo, hi, taps, i, approx, detail);
}

void analysis_cols(const double* x, std::size_t n, std::size_t w,
                   const double* lo, const double* hi, std::size_t taps,
                   double* approx, double* detail) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double* arow = approx + i * w;
        double* drow = detail + i * w;
        std::memset(arow, 0, w * sizeof(double));
        std::memset(drow, 0, w * sizeof(double));
        for (std::size_t k = 0; k < taps; ++k) {
            const double* src = x + ((2 * i + k) % n) * w;
            const __m256d lk = _mm256_set1_pd(lo[k]);
            const __m256d hk = _mm256_set1_pd(hi[k]);
            std::size_t c = 0;
            for (; c + 4 <= w; c += 4) {
                const __m256d s = _mm256_loadu_pd(src + c);
                _mm256_storeu_pd(arow + c,
                                 _mm256_add_pd(_mm256_loadu_pd(arow + c),
                                               _mm256_mul_pd(lk, s)));
                _mm256_storeu_pd(drow + c,
                                 _mm256_add_pd(_mm256_loadu_pd(drow + c),
                                               _mm256_mul_pd(hk, s)));
            }
            for (; c < w; ++c) {
                arow[c] += lo[k] * src[c];
                drow[c] += hi[k] * src[c];
            }
        }
    }
}

void synthesis_row(const double* approx, const double* detail, std::size_t n,
                   const double* lo, const double* hi, std::size_t taps,
                   double* x) {
    const std::size_t half = n / 2;
    const std::size_t hk = taps / 2; // interior needs m >= hk-1
    std::size_t m = hk > 0 ? hk - 1 : 0;
    for (std::size_t j = 0; j < 2 * m && j < n; ++j)
        x[j] = scalar_synthesis_one(approx, detail, n, lo, hi, taps, j);
    while (m + 4 <= half) {
        __m256d ev = _mm256_setzero_pd();
        __m256d ov = _mm256_setzero_pd();
        for (std::size_t k = 0; k < taps; k += 2) {
            const __m256d a = _mm256_loadu_pd(approx + m - k / 2);
            const __m256d d = _mm256_loadu_pd(detail + m - k / 2);
            ev = _mm256_add_pd(ev, _mm256_mul_pd(_mm256_set1_pd(lo[k]), a));
            ev = _mm256_add_pd(ev, _mm256_mul_pd(_mm256_set1_pd(hi[k]), d));
        }
        for (std::size_t k = 1; k < taps; k += 2) {
            const __m256d a = _mm256_loadu_pd(approx + m - (k - 1) / 2);
            const __m256d d = _mm256_loadu_pd(detail + m - (k - 1) / 2);
            ov = _mm256_add_pd(ov, _mm256_mul_pd(_mm256_set1_pd(lo[k]), a));
            ov = _mm256_add_pd(ov, _mm256_mul_pd(_mm256_set1_pd(hi[k]), d));
        }
        const __m256d t0 = _mm256_unpacklo_pd(ev, ov); // e0 o0 e2 o2
        const __m256d t1 = _mm256_unpackhi_pd(ev, ov); // e1 o1 e3 o3
        _mm256_storeu_pd(x + 2 * m, _mm256_permute2f128_pd(t0, t1, 0x20));
        _mm256_storeu_pd(x + 2 * m + 4, _mm256_permute2f128_pd(t0, t1, 0x31));
        m += 4;
    }
    for (std::size_t j = 2 * m; j < n; ++j)
        x[j] = scalar_synthesis_one(approx, detail, n, lo, hi, taps, j);
}

void synthesis_cols(const double* approx, const double* detail, std::size_t n,
                    std::size_t w, const double* lo, const double* hi,
                    std::size_t taps, double* x) {
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        double* xrow = x + j * w;
        std::memset(xrow, 0, w * sizeof(double));
        for (std::size_t k = j & 1; k < taps; k += 2) {
            const std::size_t m = coef_index(j, k, half);
            const double* am = approx + m * w;
            const double* dm = detail + m * w;
            const __m256d lk = _mm256_set1_pd(lo[k]);
            const __m256d hkv = _mm256_set1_pd(hi[k]);
            std::size_t c = 0;
            for (; c + 4 <= w; c += 4) {
                __m256d acc = _mm256_loadu_pd(xrow + c);
                acc = _mm256_add_pd(acc,
                                    _mm256_mul_pd(lk, _mm256_loadu_pd(am + c)));
                acc = _mm256_add_pd(acc,
                                    _mm256_mul_pd(hkv, _mm256_loadu_pd(dm + c)));
                _mm256_storeu_pd(xrow + c, acc);
            }
            for (; c < w; ++c) {
                xrow[c] += lo[k] * am[c];
                xrow[c] += hi[k] * dm[c];
            }
        }
    }
}

void qim_embed(const double* c, const std::uint8_t* bits, std::size_t n,
               double half_alpha, double* out) {
    const __m256d pos = _mm256_set1_pd(half_alpha);
    const __m256d neg = _mm256_set1_pd(-half_alpha);
    const __m128i zero8 = _mm_setzero_si128();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        std::uint32_t packed;
        std::memcpy(&packed, bits + i, 4);
        const __m128i b8 = _mm_cvtsi32_si128(static_cast<int>(packed));
        const __m128i b32 = _mm_cvtepu8_epi32(b8);
        const __m128i nz = _mm_cmpgt_epi32(b32, zero8);
        const __m256i mask = _mm256_cvtepi32_epi64(nz);
        const __m256d shift = _mm256_blendv_pd(neg, pos,
                                               _mm256_castsi256_pd(mask));
        _mm256_storeu_pd(out + i,
                         _mm256_add_pd(_mm256_loadu_pd(c + i), shift));
    }
    for (; i < n; ++i) out[i] = c[i] + (bits[i] ? half_alpha : -half_alpha);
}

void qim_extract(const double* marked, const double* original, std::size_t n,
                 std::uint8_t* bits) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(marked + i),
                                        _mm256_loadu_pd(original + i));
        const int mm = _mm256_movemask_pd(_mm256_cmp_pd(d, zero, _CMP_GE_OQ));
        bits[i + 0] = static_cast<std::uint8_t>(mm & 1);
        bits[i + 1] = static_cast<std::uint8_t>((mm >> 1) & 1);
        bits[i + 2] = static_cast<std::uint8_t>((mm >> 2) & 1);
        bits[i + 3] = static_cast<std::uint8_t>((mm >> 3) & 1);
    }
    for (; i < n; ++i) bits[i] = (marked[i] - original[i] >= 0.0) ? 1 : 0;
}

std::uint64_t sum_sq_diff_u8(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m128i av = _mm_loadu_si128(
            reinterpret_cast<const __m128i*>(a + i));
        const __m128i bv = _mm_loadu_si128(
            reinterpret_cast<const __m128i*>(b + i));
        const __m256i a16 = _mm256_cvtepu8_epi16(av);
        const __m256i b16 = _mm256_cvtepu8_epi16(bv);
        const __m256i d = _mm256_sub_epi16(a16, b16);
        const __m256i sq = _mm256_madd_epi16(d, d); // 8 x int32
        acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(
                                        _mm256_castsi256_si128(sq)));
        acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(
                                        _mm256_extracti128_si256(sq, 1)));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) {
        const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        total += static_cast<std::uint64_t>(d * d);
    }
    return total;
}

void conv_rows_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst) {
    const std::ptrdiff_t radius = static_cast<std::ptrdiff_t>(ntaps / 2);
    const std::size_t lo_edge = static_cast<std::size_t>(radius);
    for (std::size_t r = 0; r < h; ++r) {
        const double* srow = src + r * w;
        double* drow = dst + r * w;
        auto edge = [&](std::size_t c) {
            double s = 0.0;
            for (std::size_t k = 0; k < ntaps; ++k) {
                const std::size_t p = mirror(
                    static_cast<std::ptrdiff_t>(c) +
                        static_cast<std::ptrdiff_t>(k) - radius,
                    w);
                s += taps[k] * srow[p];
            }
            drow[c] = s;
        };
        std::size_t c = 0;
        for (; c < lo_edge && c < w; ++c) edge(c);
        // interior: c - radius >= 0 and c + 3 + radius < w
        while (c + 4 <= w &&
               c + 3 + static_cast<std::size_t>(radius) < w) {
            __m256d s = _mm256_setzero_pd();
            const double* p = srow + c - radius;
            for (std::size_t k = 0; k < ntaps; ++k)
                s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(taps[k]),
                                                   _mm256_loadu_pd(p + k)));
            _mm256_storeu_pd(drow + c, s);
            c += 4;
        }
        for (; c < w; ++c) edge(c);
    }
}

void conv_cols_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst) {
    const std::ptrdiff_t radius = static_cast<std::ptrdiff_t>(ntaps / 2);
    for (std::size_t r = 0; r < h; ++r) {
        double* drow = dst + r * w;
        std::memset(drow, 0, w * sizeof(double));
        for (std::size_t k = 0; k < ntaps; ++k) {
            const std::size_t p = mirror(
                static_cast<std::ptrdiff_t>(r) +
                    static_cast<std::ptrdiff_t>(k) - radius,
                h);
            const double* srow = src + p * w;
            const __m256d tk = _mm256_set1_pd(taps[k]);
            std::size_t c = 0;
            for (; c + 4 <= w; c += 4)
                _mm256_storeu_pd(drow + c,
                                 _mm256_add_pd(_mm256_loadu_pd(drow + c),
                                               _mm256_mul_pd(
                                                   tk, _mm256_loadu_pd(
                                                           srow + c))));
            for (; c < w; ++c) drow[c] += taps[k] * srow[c];
        }
    }
}

} // namespace wmark::kernels::avx2

#endif // x86
