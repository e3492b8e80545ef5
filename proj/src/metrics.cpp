#include "wmark/metrics.hpp"

#include <cmath>
#include <limits>

#include "wmark/kernels.hpp"

namespace wmark {

namespace {

void require_same_shape(const RasterImage& a, const RasterImage& b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels)
        throw ConstraintError("shape mismatch: image dims/channels differ");
}

std::vector<double> gaussian_taps(int n, double sigma) {
    std::vector<double> taps(static_cast<std::size_t>(n));
    const int radius = n / 2;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = k - radius;
        taps[static_cast<std::size_t>(k)] =
            std::exp(-(x * x) / (2.0 * sigma * sigma));
        sum += taps[static_cast<std::size_t>(k)];
    }
    for (auto& t : taps) t /= sum;
    return taps;
}

// Separable Gaussian blur with mirrored boundary.
Plane blur(const Plane& p, const std::vector<double>& taps) {
    Plane tmp(p.height, p.width), out(p.height, p.width);
    kernels::conv_rows_mirror(p.v.data(), p.height, p.width, taps.data(),
                              taps.size(), tmp.v.data());
    kernels::conv_cols_mirror(tmp.v.data(), p.height, p.width, taps.data(),
                              taps.size(), out.v.data());
    return out;
}

} // namespace

double psnr(const RasterImage& a, const RasterImage& b) {
    require_same_shape(a, b);
    const std::uint64_t sq =
        kernels::sum_sq_diff_u8(a.data.data(), b.data.data(), a.sample_count());
    if (sq == 0) return std::numeric_limits<double>::infinity();
    const double mse = static_cast<double>(sq) /
                       static_cast<double>(a.sample_count());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim_planes(const Plane& a, const Plane& b) {
    if (!a.same_dims(b))
        throw ConstraintError("shape mismatch: plane dims differ");
    if (a.height < MetricConfig::ssim_window ||
        a.width < MetricConfig::ssim_window)
        throw ConstraintError("shape mismatch: image smaller than SSIM window");

    const auto taps =
        gaussian_taps(MetricConfig::ssim_window, MetricConfig::ssim_sigma);
    const double c1 = MetricConfig::ssim_k1 * MetricConfig::dynamic_range;
    const double C1 = c1 * c1;
    const double c2 = MetricConfig::ssim_k2 * MetricConfig::dynamic_range;
    const double C2 = c2 * c2;

    const std::size_t n = a.count();
    Plane aa(a.height, a.width), bb(a.height, a.width), ab(a.height, a.width);
    for (std::size_t i = 0; i < n; ++i) {
        aa.v[i] = a.v[i] * a.v[i];
        bb.v[i] = b.v[i] * b.v[i];
        ab.v[i] = a.v[i] * b.v[i];
    }
    const Plane mu_a = blur(a, taps);
    const Plane mu_b = blur(b, taps);
    const Plane m_aa = blur(aa, taps);
    const Plane m_bb = blur(bb, taps);
    const Plane m_ab = blur(ab, taps);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ma = mu_a.v[i], mb = mu_b.v[i];
        const double va = m_aa.v[i] - ma * ma;
        const double vb = m_bb.v[i] - mb * mb;
        const double cov = m_ab.v[i] - ma * mb;
        const double num = (2.0 * ma * mb + C1) * (2.0 * cov + C2);
        const double den = (ma * ma + mb * mb + C1) * (va + vb + C2);
        total += num / den;
    }
    return total / static_cast<double>(n);
}

double ssim(const RasterImage& a, const RasterImage& b) {
    require_same_shape(a, b);
    // luminance planes, rounded as 8-bit luma
    auto luma_rounded = [](const RasterImage& img) {
        Plane p(img.height, img.width);
        if (img.channels == 1) {
            for (std::size_t i = 0; i < img.pixel_count(); ++i)
                p.v[i] = img.data[i];
        } else {
            for (std::size_t i = 0; i < img.pixel_count(); ++i) {
                const std::uint8_t* px = img.data.data() + 3 * i;
                p.v[i] = luma_u8(px[0], px[1], px[2]);
            }
        }
        return p;
    };
    return ssim_planes(luma_rounded(a), luma_rounded(b));
}

double ber(const BitMatrix& a, const BitMatrix& b) {
    if (!a.same_dims(b))
        throw ConstraintError("shape mismatch: bit matrix dims differ");
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.count(); ++i)
        diff += (a.bits[i] != b.bits[i]) ? 1 : 0;
    return static_cast<double>(diff) / static_cast<double>(a.count());
}

double ncc(const BitMatrix& a, const BitMatrix& b) {
    if (!a.same_dims(b))
        throw ConstraintError("shape mismatch: bit matrix dims differ");
    std::uint64_t dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.count(); ++i) {
        dot += static_cast<std::uint64_t>(a.bits[i]) * b.bits[i];
        na += a.bits[i];
        nb += b.bits[i];
    }
    if (na == 0 && nb == 0) return 1.0;
    if (na == 0 || nb == 0) return 0.0;
    return static_cast<double>(dot) /
           (std::sqrt(static_cast<double>(na)) *
            std::sqrt(static_cast<double>(nb)));
}

double ncc_planes(const Plane& a, const Plane& b) {
    if (!a.same_dims(b))
        throw ConstraintError("shape mismatch: plane dims differ");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.count(); ++i) {
        dot += a.v[i] * b.v[i];
        na += a.v[i] * a.v[i];
        nb += b.v[i] * b.v[i];
    }
    if (na == 0.0 && nb == 0.0) return 1.0;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace wmark
