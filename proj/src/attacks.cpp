#include "wmark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wmark/image_codec.hpp"

#include "json.hpp"

namespace wmark {

namespace {

double round_half_up(double v) { return std::floor(v + 0.5); }

std::uint8_t to_u8(double v) {
    v = round_half_up(v);
    if (v < 0.0) v = 0.0;
    if (v > 255.0) v = 255.0;
    return static_cast<std::uint8_t>(v);
}

// cos/sin of theta degrees with exact values at multiples of 90
void rotation_terms(double theta_deg, double& c, double& s) {
    const double rad = theta_deg * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
    for (double v : {-1.0, 0.0, 1.0}) {
        if (std::fabs(c - v) < 1e-12) c = v;
        if (std::fabs(s - v) < 1e-12) s = v;
    }
}

void rotated_dims(std::size_t w, std::size_t h, double c, double s,
                  std::size_t& out_w, std::size_t& out_h) {
    const double ac = std::fabs(c), as = std::fabs(s);
    out_w = static_cast<std::size_t>(
        std::ceil(static_cast<double>(w) * ac + static_cast<double>(h) * as));
    out_h = static_cast<std::size_t>(
        std::ceil(static_cast<double>(w) * as + static_cast<double>(h) * ac));
}

// Bilinear sample with zero fill outside the raster.
double sample_bilinear_black(const RasterImage& img, double x, double y,
                             int ch) {
    const double x0f = std::floor(x), y0f = std::floor(y);
    const std::ptrdiff_t x0 = static_cast<std::ptrdiff_t>(x0f);
    const std::ptrdiff_t y0 = static_cast<std::ptrdiff_t>(y0f);
    const double fx = x - x0f, fy = y - y0f;
    auto texel = [&](std::ptrdiff_t xx, std::ptrdiff_t yy) -> double {
        if (xx < 0 || yy < 0 ||
            xx >= static_cast<std::ptrdiff_t>(img.width) ||
            yy >= static_cast<std::ptrdiff_t>(img.height))
            return 0.0;
        return img.data[(static_cast<std::size_t>(yy) * img.width +
                         static_cast<std::size_t>(xx)) *
                            img.channels +
                        static_cast<std::size_t>(ch)];
    };
    const double top = texel(x0, y0) * (1.0 - fx) + texel(x0 + 1, y0) * fx;
    const double bot =
        texel(x0, y0 + 1) * (1.0 - fx) + texel(x0 + 1, y0 + 1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

// Bilinear resize with half-pixel center alignment and edge clamping.
RasterImage resize_bilinear(const RasterImage& img, std::size_t oh,
                            std::size_t ow) {
    RasterImage out(ow, oh, img.channels);
    const double rx = static_cast<double>(img.width) / static_cast<double>(ow);
    const double ry =
        static_cast<double>(img.height) / static_cast<double>(oh);
    for (std::size_t r = 0; r < oh; ++r) {
        double sy = (static_cast<double>(r) + 0.5) * ry - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(img.height - 1));
        const std::size_t y0 = static_cast<std::size_t>(sy);
        const std::size_t y1 = std::min(y0 + 1, img.height - 1);
        const double fy = sy - static_cast<double>(y0);
        for (std::size_t c = 0; c < ow; ++c) {
            double sx = (static_cast<double>(c) + 0.5) * rx - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(img.width - 1));
            const std::size_t x0 = static_cast<std::size_t>(sx);
            const std::size_t x1 = std::min(x0 + 1, img.width - 1);
            const double fx = sx - static_cast<double>(x0);
            for (int ch = 0; ch < img.channels; ++ch) {
                const double top = img.at(y0, x0, ch) * (1.0 - fx) +
                                   img.at(y0, x1, ch) * fx;
                const double bot = img.at(y1, x0, ch) * (1.0 - fx) +
                                   img.at(y1, x1, ch) * fx;
                out.at(r, c, ch) = to_u8(top * (1.0 - fy) + bot * fy);
            }
        }
    }
    return out;
}

RasterImage resize_nearest(const RasterImage& img, std::size_t oh,
                           std::size_t ow) {
    RasterImage out(ow, oh, img.channels);
    const double rx = static_cast<double>(img.width) / static_cast<double>(ow);
    const double ry =
        static_cast<double>(img.height) / static_cast<double>(oh);
    for (std::size_t r = 0; r < oh; ++r) {
        const std::size_t sy = std::min(
            img.height - 1,
            static_cast<std::size_t>((static_cast<double>(r) + 0.5) * ry));
        for (std::size_t c = 0; c < ow; ++c) {
            const std::size_t sx = std::min(
                img.width - 1,
                static_cast<std::size_t>((static_cast<double>(c) + 0.5) * rx));
            for (int ch = 0; ch < img.channels; ++ch)
                out.at(r, c, ch) = img.at(sy, sx, ch);
        }
    }
    return out;
}

std::size_t scaled_extent(std::size_t n, double f) {
    const long v = std::lround(static_cast<double>(n) * f);
    return v < 1 ? 1 : static_cast<std::size_t>(v);
}

std::size_t mirror_idx(std::ptrdiff_t p, std::size_t len) {
    if (p < 0) p = -p - 1;
    const std::ptrdiff_t l = static_cast<std::ptrdiff_t>(len);
    if (p >= l) p = 2 * l - 1 - p;
    return static_cast<std::size_t>(p);
}

RasterImage attack_crop(const RasterImage& img, double r) {
    const std::size_t rh = static_cast<std::size_t>(
        std::lround(static_cast<double>(img.height) * (1.0 - 2.0 * r)));
    const std::size_t rw = static_cast<std::size_t>(
        std::lround(static_cast<double>(img.width) * (1.0 - 2.0 * r)));
    RasterImage out(img.width, img.height, img.channels, 0);
    const std::size_t top = (img.height - rh) / 2;
    const std::size_t left = (img.width - rw) / 2;
    for (std::size_t rr = 0; rr < rh; ++rr) {
        const std::uint8_t* src =
            img.data.data() +
            ((top + rr) * img.width + left) * img.channels;
        std::uint8_t* dst = out.data.data() +
                            ((top + rr) * img.width + left) * img.channels;
        std::copy(src, src + rw * img.channels, dst);
    }
    return out;
}

RasterImage attack_rotate(const RasterImage& img, double theta) {
    double c, s;
    rotation_terms(theta, c, s);
    std::size_t ow, oh;
    rotated_dims(img.width, img.height, c, s, ow, oh);
    RasterImage out(ow, oh, img.channels, 0);
    const double cx_in = (static_cast<double>(img.width) - 1.0) / 2.0;
    const double cy_in = (static_cast<double>(img.height) - 1.0) / 2.0;
    const double cx_out = (static_cast<double>(ow) - 1.0) / 2.0;
    const double cy_out = (static_cast<double>(oh) - 1.0) / 2.0;
    for (std::size_t r = 0; r < oh; ++r) {
        const double dy = static_cast<double>(r) - cy_out;
        for (std::size_t cc = 0; cc < ow; ++cc) {
            const double dx = static_cast<double>(cc) - cx_out;
            const double sx = c * dx + s * dy + cx_in;
            const double sy = -s * dx + c * dy + cy_in;
            for (int ch = 0; ch < img.channels; ++ch)
                out.at(r, cc, ch) =
                    to_u8(sample_bilinear_black(img, sx, sy, ch));
        }
    }
    return out;
}

RasterImage attack_gaussian(const RasterImage& img, double sigma,
                            std::uint64_t seed) {
    NoiseStream noise(seed);
    RasterImage out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.sample_count(); ++i)
        out.data[i] =
            to_u8(static_cast<double>(img.data[i]) + sigma * noise.normal());
    return out;
}

RasterImage attack_median(const RasterImage& img, int k) {
    const int radius = k / 2;
    RasterImage out(img.width, img.height, img.channels);
    std::vector<std::uint8_t> window(static_cast<std::size_t>(k) * k);
    for (std::size_t r = 0; r < img.height; ++r) {
        for (std::size_t c = 0; c < img.width; ++c) {
            for (int ch = 0; ch < img.channels; ++ch) {
                std::size_t n = 0;
                for (int dy = -radius; dy <= radius; ++dy) {
                    const std::size_t sy = mirror_idx(
                        static_cast<std::ptrdiff_t>(r) + dy, img.height);
                    for (int dx = -radius; dx <= radius; ++dx) {
                        const std::size_t sx = mirror_idx(
                            static_cast<std::ptrdiff_t>(c) + dx, img.width);
                        window[n++] = img.at(sy, sx, ch);
                    }
                }
                auto mid = window.begin() + (n / 2);
                std::nth_element(window.begin(), mid, window.begin() + n);
                out.at(r, c, ch) = *mid;
            }
        }
    }
    return out;
}

RasterImage attack_sandpaper(const RasterImage& img, double p,
                             std::uint64_t seed) {
    NoiseStream noise(seed);
    RasterImage out = img;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        if (noise.uniform() < p) {
            const std::uint8_t v = noise.uniform() < 0.5 ? 0 : 255;
            for (int ch = 0; ch < img.channels; ++ch)
                out.data[i * img.channels + ch] = v;
        }
    }
    return out;
}

} // namespace

double NoiseStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller; u1 in (0,1] so the log is finite
    const double u1 =
        (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    cached_ = mag * std::sin(ang);
    has_cached_ = true;
    return mag * std::cos(ang);
}

void AttackSpec::validate() const {
    const auto bad = [&](const char* why) {
        throw ArgumentError(std::string("bad attack parameter: ") + why);
    };
    if (!std::isfinite(param)) bad("value not finite");
    switch (kind) {
        case AttackKind::crop:
            if (param < 0.0 || param >= 0.5) bad("crop r must be in [0, 0.5)");
            break;
        case AttackKind::rotate:
            break;
        case AttackKind::scale:
            if (param <= 0.0) bad("scale s must be > 0");
            break;
        case AttackKind::gaussian:
            if (param < 0.0) bad("gaussian sigma must be >= 0");
            break;
        case AttackKind::jpeg:
            if (param < 1.0 || param > 100.0 ||
                param != std::floor(param))
                bad("jpeg q must be an integer in [1,100]");
            break;
        case AttackKind::median:
            if (param < 1.0 || param != std::floor(param) ||
                (static_cast<long>(param) % 2) == 0)
                bad("median k must be an odd integer >= 1");
            break;
        case AttackKind::resize:
            if (param <= 0.0) bad("resize f must be > 0");
            break;
        case AttackKind::sandpaper:
            if (param < 0.0 || param > 1.0)
                bad("sandpaper p must be in [0,1]");
            break;
    }
}

const char* attack_kind_name(AttackKind kind) {
    switch (kind) {
        case AttackKind::crop: return "crop";
        case AttackKind::rotate: return "rotate";
        case AttackKind::scale: return "scale";
        case AttackKind::gaussian: return "gaussian";
        case AttackKind::jpeg: return "jpeg";
        case AttackKind::median: return "median";
        case AttackKind::resize: return "resize";
        case AttackKind::sandpaper: return "sandpaper";
    }
    return "?";
}

const char* attack_param_key(AttackKind kind) {
    switch (kind) {
        case AttackKind::crop: return "r";
        case AttackKind::rotate: return "theta";
        case AttackKind::scale: return "s";
        case AttackKind::gaussian: return "sigma";
        case AttackKind::jpeg: return "q";
        case AttackKind::median: return "k";
        case AttackKind::resize: return "f";
        case AttackKind::sandpaper: return "p";
    }
    return "?";
}

std::string serialize_attack(const AttackSpec& spec) {
    std::string out = "kind=";
    out += attack_kind_name(spec.kind);
    out += ',';
    out += attack_param_key(spec.kind);
    out += '=';
    if (spec.kind == AttackKind::jpeg || spec.kind == AttackKind::median)
        out += std::to_string(static_cast<long>(spec.param));
    else
        out += nlohmann::json(spec.param).dump();
    out += ",seed=" + std::to_string(spec.seed);
    return out;
}

AttackSpec parse_attack(const std::string& text) {
    AttackSpec spec;
    bool have_kind = false, have_param = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string token = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (token.empty()) {
            if (pos > text.size()) break;
            continue;
        }
        const std::size_t eq = token.find('=');
        if (eq == std::string::npos)
            throw ArgumentError("bad attack parameter: expected key=value in '" +
                                token + "'");
        const std::string key = token.substr(0, eq);
        const std::string val = token.substr(eq + 1);
        if (key == "kind") {
            static constexpr AttackKind kinds[] = {
                AttackKind::crop,   AttackKind::rotate, AttackKind::scale,
                AttackKind::gaussian, AttackKind::jpeg, AttackKind::median,
                AttackKind::resize, AttackKind::sandpaper};
            bool found = false;
            for (AttackKind k : kinds)
                if (val == attack_kind_name(k)) {
                    spec.kind = k;
                    found = true;
                    break;
                }
            if (!found)
                throw ArgumentError("bad attack parameter: unknown kind '" +
                                    val + "'");
            have_kind = true;
        } else if (key == "seed") {
            try {
                spec.seed = std::stoull(val);
            } catch (const std::exception&) {
                throw ArgumentError("bad attack parameter: seed '" + val + "'");
            }
        } else {
            if (!have_kind)
                throw ArgumentError(
                    "bad attack parameter: kind must come first in '" + text +
                    "'");
            if (key != attack_param_key(spec.kind))
                throw ArgumentError("bad attack parameter: key '" + key +
                                    "' does not belong to kind '" +
                                    attack_kind_name(spec.kind) + "'");
            try {
                spec.param = std::stod(val);
            } catch (const std::exception&) {
                throw ArgumentError("bad attack parameter: value '" + val +
                                    "'");
            }
            have_param = true;
        }
    }
    if (!have_kind)
        throw ArgumentError("bad attack parameter: missing kind in '" + text +
                            "'");
    if (!have_param)
        throw ArgumentError("bad attack parameter: missing " +
                            std::string(attack_param_key(spec.kind)) +
                            " for kind '" + attack_kind_name(spec.kind) + "'");
    spec.validate();
    return spec;
}

RasterImage apply(const AttackSpec& spec, const RasterImage& img) {
    spec.validate();
    if (img.width == 0 || img.height == 0)
        throw ConstraintError("shape mismatch: empty image");
    switch (spec.kind) {
        case AttackKind::crop:
            return attack_crop(img, spec.param);
        case AttackKind::rotate:
            return attack_rotate(img, spec.param);
        case AttackKind::scale: {
            const std::size_t sh = scaled_extent(img.height, spec.param);
            const std::size_t sw = scaled_extent(img.width, spec.param);
            if (sh == img.height && sw == img.width && spec.param == 1.0)
                return img;
            return resize_bilinear(resize_bilinear(img, sh, sw), img.height,
                                   img.width);
        }
        case AttackKind::gaussian:
            return attack_gaussian(img, spec.param, spec.seed);
        case AttackKind::jpeg:
            return jpeg_decode(
                jpeg_encode(img, static_cast<int>(spec.param)));
        case AttackKind::median:
            if (spec.param == 1.0) return img;
            return attack_median(img, static_cast<int>(spec.param));
        case AttackKind::resize: {
            const std::size_t sh = scaled_extent(img.height, spec.param);
            const std::size_t sw = scaled_extent(img.width, spec.param);
            if (sh == img.height && sw == img.width && spec.param == 1.0)
                return img;
            return resize_nearest(resize_nearest(img, sh, sw), img.height,
                                  img.width);
        }
        case AttackKind::sandpaper:
            return attack_sandpaper(img, spec.param, spec.seed);
    }
    throw ArgumentError("bad attack parameter: unknown kind");
}

RasterImage realign(const AttackSpec& spec, const RasterImage& attacked,
                    Dims original_dims) {
    if (spec.kind != AttackKind::rotate)
        throw ArgumentError(std::string("no realignment defined for kind '") +
                            attack_kind_name(spec.kind) + "'");
    double c, s;
    rotation_terms(spec.param, c, s);
    std::size_t exp_w, exp_h;
    rotated_dims(original_dims.width, original_dims.height, c, s, exp_w,
                 exp_h);
    if (attacked.width != exp_w || attacked.height != exp_h)
        throw ConstraintError(
            "shape mismatch: attacked dims do not match the rotation of " +
            std::to_string(original_dims.width) + "x" +
            std::to_string(original_dims.height));

    RasterImage out(original_dims.width, original_dims.height,
                    attacked.channels, 0);
    const double cx_o = (static_cast<double>(out.width) - 1.0) / 2.0;
    const double cy_o = (static_cast<double>(out.height) - 1.0) / 2.0;
    const double cx_a = (static_cast<double>(attacked.width) - 1.0) / 2.0;
    const double cy_a = (static_cast<double>(attacked.height) - 1.0) / 2.0;
    for (std::size_t r = 0; r < out.height; ++r) {
        const double py = static_cast<double>(r) - cy_o;
        for (std::size_t cc = 0; cc < out.width; ++cc) {
            const double px = static_cast<double>(cc) - cx_o;
            const double qx = c * px - s * py + cx_a;
            const double qy = s * px + c * py + cy_a;
            for (int ch = 0; ch < attacked.channels; ++ch)
                out.at(r, cc, ch) =
                    to_u8(sample_bilinear_black(attacked, qx, qy, ch));
        }
    }
    return out;
}

} // namespace wmark
