#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "wmark/image.hpp"
#include "wmark/wavelet.hpp"

namespace wmark {

enum class AttackKind {
    crop,      // r in [0, 0.5): border fraction removed per side
    rotate,    // theta degrees, canvas expanded so no corners are lost
    scale,     // s > 0: bilinear resize by s, bilinear back
    gaussian,  // sigma >= 0 gray levels, i.i.d. per sample, seeded
    jpeg,      // q in [1,100]: baseline encode/decode round trip
    median,    // k odd >= 1: per-channel k x k median, mirrored borders
    resize,    // f > 0: nearest-neighbor resize by f, nearest back
    sandpaper, // p in [0,1]: per-pixel black/white impulses, seeded
};

struct AttackSpec {
    AttackKind kind = AttackKind::crop;
    double param = 0.0;
    std::uint64_t seed = 0;

    // Throws ArgumentError("bad attack parameter ...") on out-of-range values.
    void validate() const;
};

const char* attack_kind_name(AttackKind kind);
const char* attack_param_key(AttackKind kind);

// Text form "kind=jpeg,q=30,seed=42"; parse accepts the same shape.
std::string serialize_attack(const AttackSpec& spec);
AttackSpec parse_attack(const std::string& text);

// Applies the attack. All kinds preserve dims except rotate, whose output is
// ceil(W|cos| + H|sin|) x ceil(W|sin| + H|cos|).
RasterImage apply(const AttackSpec& spec, const RasterImage& img);

// Undoes the geometry of a rotation so non-blind extraction can proceed:
// rotates by -theta about the expanded-canvas center and resamples straight
// into the original dims (the centered crop folded into the same bilinear
// pass). Throws ArgumentError("no realignment defined") for other kinds and
// ConstraintError on a dims mismatch.
RasterImage realign(const AttackSpec& spec, const RasterImage& attacked,
                    Dims original_dims);

// Seeded noise source: mt19937_64 with 53-bit uniforms and Box-Muller
// normals, fully specified so runs reproduce across platforms.
class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed)
        : rng_(seed) {}
    // [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }
    double normal();
private:
    std::mt19937_64 rng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace wmark
