#include "wmark/wavelet.hpp"

#include <algorithm>
#include <cmath>

#include "wmark/kernels.hpp"

namespace wmark {

namespace {

// Orthonormal Daubechies scaling filters, 17 significant digits.
const std::array<std::vector<double>, 8> kDaubechies = {{
    {0.70710678118654752, 0.70710678118654752},
    {0.48296291314453414, 0.83651630373780791, 0.22414386804201338,
     -0.12940952255126038},
    {0.33267055295008262, 0.80689150931109258, 0.45987750211849157,
     -0.13501102001025459, -0.085441273882026662, 0.035226291885709537},
    {0.2303778133088965, 0.71484657055291565, 0.63088076792985891,
     -0.027983769416859854, -0.18703481171909308, 0.030841381835560764,
     0.0328830116668852, -0.010597401785069032},
    {0.16010239797419291, 0.60382926979718967, 0.72430852843777293,
     0.13842814590132073, -0.24229488706638203, -0.032244869584638375,
     0.077571493840045714, -0.0062414902127982743, -0.012580751999081999,
     0.0033357252854737713},
    {0.11154074335010946, 0.49462389039845309, 0.75113390802109535,
     0.31525035170919763, -0.22626469396543982, -0.12976686756726194,
     0.097501605587323049, 0.027522865530305729, -0.03158203931748603,
     0.00055384220116149614, 0.0047772575109455106, -0.0010773010853084796},
    {0.077852054085009179, 0.39653931948191731, 0.72913209084623512,
     0.46978228740519312, -0.14390600392856498, -0.22403618499387498,
     0.071309219266830265, 0.080612609151083072, -0.038029936935014414,
     -0.016574541630666881, 0.012550998556099841, 0.00042957797292136652,
     -0.0018016407040474909, 0.00035371379997452025},
    {0.05441584224310401, 0.31287159091429997, 0.67563073629728981,
     0.58535468365420671, -0.015829105256349306, -0.28401554296154693,
     0.00047248457391328277, 0.12874742662047846, -0.017369301001807546,
     -0.044088253930794752, 0.013981027917398282, 0.0087460940474057767,
     -0.0048703529934515743, -0.00039174037337694705, 0.00067544940645056937,
     -0.00011747678412476953},
}};

std::size_t ceil_half(std::size_t n) { return (n + 1) / 2; }

// One analysis level: rows then columns, with odd extents extended by one
// repeated sample so every pass sees an even length.
void analyze_level(const Plane& src, const double* lo, const double* hi,
                   std::size_t taps, Plane& ll, DetailBands& bands) {
    const std::size_t h = src.height, w = src.width;
    const std::size_t we = w + (w & 1);
    const std::size_t cw = we / 2;

    Plane lowpart(h + (h & 1), cw);
    Plane highpart(h + (h & 1), cw);
    std::vector<double> padded(we);
    for (std::size_t r = 0; r < h; ++r) {
        const double* row = src.row(r);
        if (w & 1) {
            std::copy(row, row + w, padded.begin());
            padded[w] = row[w - 1];
            row = padded.data();
        }
        kernels::analysis_row(row, we, lo, hi, taps, lowpart.row(r),
                              highpart.row(r));
    }
    if (h & 1) {
        std::copy(lowpart.row(h - 1), lowpart.row(h - 1) + cw, lowpart.row(h));
        std::copy(highpart.row(h - 1), highpart.row(h - 1) + cw,
                  highpart.row(h));
    }

    const std::size_t he = h + (h & 1);
    const std::size_t ch = he / 2;
    ll = Plane(ch, cw);
    bands.lh = Plane(ch, cw);
    bands.hl = Plane(ch, cw);
    bands.hh = Plane(ch, cw);
    kernels::analysis_cols(lowpart.v.data(), he, cw, lo, hi, taps,
                           ll.v.data(), bands.lh.v.data());
    kernels::analysis_cols(highpart.v.data(), he, cw, lo, hi, taps,
                           bands.hl.v.data(), bands.hh.v.data());
}

// One synthesis level, inverting analyze_level; `dims` are the dims of the
// plane the analysis consumed.
Plane synthesize_level(const Plane& ll, const DetailBands& bands,
                       const double* lo, const double* hi, std::size_t taps,
                       Dims dims) {
    const std::size_t h = dims.height, w = dims.width;
    const std::size_t he = h + (h & 1), we = w + (w & 1);
    const std::size_t cw = we / 2;

    Plane lowpart(he, cw);
    Plane highpart(he, cw);
    kernels::synthesis_cols(ll.v.data(), bands.lh.v.data(), he, cw, lo, hi,
                            taps, lowpart.v.data());
    kernels::synthesis_cols(bands.hl.v.data(), bands.hh.v.data(), he, cw, lo,
                            hi, taps, highpart.v.data());

    Plane out(h, w);
    std::vector<double> full(we);
    for (std::size_t r = 0; r < h; ++r) {
        kernels::synthesis_row(lowpart.row(r), highpart.row(r), we, lo, hi,
                               taps, full.data());
        std::copy(full.begin(), full.begin() + w, out.row(r));
    }
    return out;
}

void validate_spec(const WaveletSpec& spec) {
    if (spec.family < 1 || spec.family > 8)
        throw ArgumentError("wavelet family must be db1..db8");
    if (spec.level < 1) throw ArgumentError("decomposition level must be >= 1");
}

} // namespace

WaveletSpec parse_wavelet_name(const std::string& name, int level) {
    if (name.size() >= 3 && name.compare(0, 2, "db") == 0) {
        const std::string num = name.substr(2);
        if (num.find_first_not_of("0123456789") == std::string::npos &&
            !num.empty()) {
            const int k = std::stoi(num);
            if (k >= 1 && k <= 8) return WaveletSpec{k, level};
        }
    }
    throw ArgumentError("unknown wavelet '" + name + "' (supported: db1..db8)");
}

std::string wavelet_name(const WaveletSpec& spec) {
    return "db" + std::to_string(spec.family);
}

std::span<const double> daubechies_lowpass(int family) {
    if (family < 1 || family > 8)
        throw ArgumentError("wavelet family must be db1..db8");
    return kDaubechies[static_cast<std::size_t>(family - 1)];
}

std::vector<double> daubechies_highpass(int family) {
    const auto lo = daubechies_lowpass(family);
    std::vector<double> hi(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
        const double v = lo[lo.size() - 1 - k];
        hi[k] = (k & 1) ? -v : v;
    }
    return hi;
}

SubbandPyramid fwt2(const Plane& plane, const WaveletSpec& spec) {
    validate_spec(spec);
    const std::size_t min_dim = std::min(plane.height, plane.width);
    if (spec.level >= 30 || (std::size_t{1} << spec.level) > min_dim)
        throw ConstraintError("decomposition too deep: level " +
                              std::to_string(spec.level) +
                              " exceeds log2 of the smaller dimension");

    const auto lo = daubechies_lowpass(spec.family);
    const auto hi = daubechies_highpass(spec.family);

    SubbandPyramid pyr;
    pyr.details.resize(static_cast<std::size_t>(spec.level));
    pyr.original_dims.resize(static_cast<std::size_t>(spec.level));

    Plane cur = plane;
    for (int lv = 0; lv < spec.level; ++lv) {
        // index L-1-lv: coarsest ends up first
        const std::size_t slot = static_cast<std::size_t>(spec.level - 1 - lv);
        pyr.original_dims[slot] = Dims{cur.height, cur.width};
        Plane next;
        analyze_level(cur, lo.data(), hi.data(), lo.size(), next,
                      pyr.details[slot]);
        cur = std::move(next);
    }
    pyr.ll = std::move(cur);
    return pyr;
}

Plane ifwt2(const SubbandPyramid& pyr, const WaveletSpec& spec) {
    validate_spec(spec);
    if (pyr.details.size() != pyr.original_dims.size() || pyr.details.empty())
        throw ConstraintError("corrupt pyramid: level bookkeeping mismatch");

    // dims chain: each level's bands are the ceil-halves of the plane it
    // consumed, and that plane is what the next-finer level produced
    Dims expect{pyr.ll.height, pyr.ll.width};
    for (std::size_t i = 0; i < pyr.details.size(); ++i) {
        const Dims parent = pyr.original_dims[i];
        const Dims half{ceil_half(parent.height), ceil_half(parent.width)};
        const DetailBands& b = pyr.details[i];
        if (expect != half || b.lh.height != half.height ||
            b.lh.width != half.width || !b.lh.same_dims(b.hl) ||
            !b.lh.same_dims(b.hh))
            throw ConstraintError("corrupt pyramid: dims chain broken at level " +
                                  std::to_string(i));
        expect = parent;
    }

    const auto lo = daubechies_lowpass(spec.family);
    const auto hi = daubechies_highpass(spec.family);

    Plane cur = pyr.ll;
    for (std::size_t i = 0; i < pyr.details.size(); ++i)
        cur = synthesize_level(cur, pyr.details[i], lo.data(), hi.data(),
                               lo.size(), pyr.original_dims[i]);
    return cur;
}

} // namespace wmark
