#include "wmark/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define WMARK_X86 1
#else
#define WMARK_X86 0
#endif

namespace wmark::kernels {

bool have_avx2() {
#if WMARK_X86
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

const char* active_isa_name() { return have_avx2() ? "avx2" : "scalar"; }

#if WMARK_X86
#define WMARK_DISPATCH(fn, ...) \
    do {                        \
        if (have_avx2())        \
            avx2::fn(__VA_ARGS__); \
        else                    \
            scalar::fn(__VA_ARGS__); \
    } while (0)
#define WMARK_DISPATCH_RET(fn, ...) \
    return have_avx2() ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define WMARK_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#define WMARK_DISPATCH_RET(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void ycbcr_from_rgb(const std::uint8_t* rgb, double* y, double* cb, double* cr,
                    std::size_t count) {
    WMARK_DISPATCH(ycbcr_from_rgb, rgb, y, cb, cr, count);
}

void rgb_from_ycbcr(const double* y, const double* cb, const double* cr,
                    std::uint8_t* rgb, std::size_t count) {
    WMARK_DISPATCH(rgb_from_ycbcr, y, cb, cr, rgb, count);
}

void analysis_row(const double* x, std::size_t n, const double* lo,
                  const double* hi, std::size_t taps, double* approx,
                  double* detail) {
    WMARK_DISPATCH(analysis_row, x, n, lo, hi, taps, approx, detail);
}

void analysis_cols(const double* x, std::size_t n, std::size_t w,
                   const double* lo, const double* hi, std::size_t taps,
                   double* approx, double* detail) {
    WMARK_DISPATCH(analysis_cols, x, n, w, lo, hi, taps, approx, detail);
}

void synthesis_row(const double* approx, const double* detail, std::size_t n,
                   const double* lo, const double* hi, std::size_t taps,
                   double* x) {
    WMARK_DISPATCH(synthesis_row, approx, detail, n, lo, hi, taps, x);
}

void synthesis_cols(const double* approx, const double* detail, std::size_t n,
                    std::size_t w, const double* lo, const double* hi,
                    std::size_t taps, double* x) {
    WMARK_DISPATCH(synthesis_cols, approx, detail, n, w, lo, hi, taps, x);
}

void qim_embed(const double* c, const std::uint8_t* bits, std::size_t n,
               double half_alpha, double* out) {
    WMARK_DISPATCH(qim_embed, c, bits, n, half_alpha, out);
}

void qim_extract(const double* marked, const double* original, std::size_t n,
                 std::uint8_t* bits) {
    WMARK_DISPATCH(qim_extract, marked, original, n, bits);
}

std::uint64_t sum_sq_diff_u8(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t n) {
    WMARK_DISPATCH_RET(sum_sq_diff_u8, a, b, n);
}

void conv_rows_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst) {
    WMARK_DISPATCH(conv_rows_mirror, src, h, w, taps, ntaps, dst);
}

void conv_cols_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst) {
    WMARK_DISPATCH(conv_cols_mirror, src, h, w, taps, ntaps, dst);
}

} // namespace wmark::kernels
