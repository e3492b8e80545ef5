#pragma once

#include <cstddef>
#include <cstdint>

// Hot inner loops, each with a scalar reference implementation and an AVX2
// variant selected at runtime. Both variants perform per-output arithmetic in
// the same order, so results are bit-identical; the equivalence tests assert
// exact equality. Translation units here must be built with -ffp-contract=off
// so the compiler does not fuse multiply-add chains on one side only.

namespace wmark::kernels {

// True when the CPU supports AVX2 and the dispatcher will use it.
bool have_avx2();
const char* active_isa_name();

// --- Dispatching entry points ------------------------------------------

// BT.601 full-range conversion between interleaved 8-bit RGB and double
// planes. `count` is the pixel count.
void ycbcr_from_rgb(const std::uint8_t* rgb, double* y, double* cb, double* cr,
                    std::size_t count);
// Inverse transform; each channel is floor(x+0.5)-rounded then clamped to
// [0,255].
void rgb_from_ycbcr(const double* y, const double* cb, const double* cr,
                    std::uint8_t* rgb, std::size_t count);

// Periodized analysis step along one contiguous signal of even length n:
//   approx[i] = sum_k lo[k] * x[(2i+k) mod n]
//   detail[i] = sum_k hi[k] * x[(2i+k) mod n]      for i in [0, n/2)
void analysis_row(const double* x, std::size_t n, const double* lo,
                  const double* hi, std::size_t taps, double* approx,
                  double* detail);

// Same recurrence down the columns of a dense row-major block with `w`
// columns and an even number of rows n. Outputs are dense n/2 x w blocks.
void analysis_cols(const double* x, std::size_t n, std::size_t w,
                   const double* lo, const double* hi, std::size_t taps,
                   double* approx, double* detail);

// Periodized synthesis, the adjoint of the analysis step, in gather form:
//   x[j] = sum_{k >= (j mod 2), k += 2} lo[k]*a[m] + hi[k]*d[m]
//   with m = ((j-k)/2) mod (n/2); n even, j in [0, n).
void synthesis_row(const double* approx, const double* detail, std::size_t n,
                   const double* lo, const double* hi, std::size_t taps,
                   double* x);
void synthesis_cols(const double* approx, const double* detail, std::size_t n,
                    std::size_t w, const double* lo, const double* hi,
                    std::size_t taps, double* x);

// out[i] = c[i] + (bits[i] ? +half_alpha : -half_alpha); in-place allowed.
void qim_embed(const double* c, const std::uint8_t* bits, std::size_t n,
               double half_alpha, double* out);
// bits[i] = (marked[i] - original[i] >= 0) ? 1 : 0.
void qim_extract(const double* marked, const double* original, std::size_t n,
                 std::uint8_t* bits);

// Sum of squared differences of 8-bit samples (exact integer arithmetic).
std::uint64_t sum_sq_diff_u8(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t n);

// Separable correlation with symmetric (mirrored, edge included) boundary:
//   dst[r][c] = sum_k taps[k] * src[r][mirror(c + k - ntaps/2)]  (rows)
// and the transposed variant down columns. Used by the SSIM window stats.
void conv_rows_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst);
void conv_cols_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst);

// --- Per-ISA variants (exposed for the equivalence tests) ---------------

namespace scalar {
void ycbcr_from_rgb(const std::uint8_t* rgb, double* y, double* cb, double* cr,
                    std::size_t count);
void rgb_from_ycbcr(const double* y, const double* cb, const double* cr,
                    std::uint8_t* rgb, std::size_t count);
void analysis_row(const double* x, std::size_t n, const double* lo,
                  const double* hi, std::size_t taps, double* approx,
                  double* detail);
void analysis_cols(const double* x, std::size_t n, std::size_t w,
                   const double* lo, const double* hi, std::size_t taps,
                   double* approx, double* detail);
void synthesis_row(const double* approx, const double* detail, std::size_t n,
                   const double* lo, const double* hi, std::size_t taps,
                   double* x);
void synthesis_cols(const double* approx, const double* detail, std::size_t n,
                    std::size_t w, const double* lo, const double* hi,
                    std::size_t taps, double* x);
void qim_embed(const double* c, const std::uint8_t* bits, std::size_t n,
               double half_alpha, double* out);
void qim_extract(const double* marked, const double* original, std::size_t n,
                 std::uint8_t* bits);
std::uint64_t sum_sq_diff_u8(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t n);
void conv_rows_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst);
void conv_cols_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst);
} // namespace scalar

// Only call these when have_avx2() is true.
namespace avx2 {
void ycbcr_from_rgb(const std::uint8_t* rgb, double* y, double* cb, double* cr,
                    std::size_t count);
void rgb_from_ycbcr(const double* y, const double* cb, const double* cr,
                    std::uint8_t* rgb, std::size_t count);
void analysis_row(const double* x, std::size_t n, const double* lo,
                  const double* hi, std::size_t taps, double* approx,
                  double* detail);
void analysis_cols(const double* x, std::size_t n, std::size_t w,
                   const double* lo, const double* hi, std::size_t taps,
                   double* approx, double* detail);
void synthesis_row(const double* approx, const double* detail, std::size_t n,
                   const double* lo, const double* hi, std::size_t taps,
                   double* x);
void synthesis_cols(const double* approx, const double* detail, std::size_t n,
                    std::size_t w, const double* lo, const double* hi,
                    std::size_t taps, double* x);
void qim_embed(const double* c, const std::uint8_t* bits, std::size_t n,
               double half_alpha, double* out);
void qim_extract(const double* marked, const double* original, std::size_t n,
                 std::uint8_t* bits);
std::uint64_t sum_sq_diff_u8(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t n);
void conv_rows_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst);
void conv_cols_mirror(const double* src, std::size_t h, std::size_t w,
                      const double* taps, std::size_t ntaps, double* dst);
} // namespace avx2

} // namespace wmark::kernels
