#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "geosynth/core/geometry.hpp"
#include "geosynth/core/rng.hpp"
#include "geosynth/render/palette.hpp"
#include "geosynth/scenegen/heightfield.hpp"
#include "geosynth/scenegen/scene.hpp"

namespace geosynth::render {

struct ColorF {
    double r = 0.0, g = 0.0, b = 0.0;

    ColorF scaled(double s) const { return {r * s, g * s, b * s}; }
};

/// Seeded procedural materials: per-class multi-octave noise over world
/// coordinates, tinted per palette and per object. Purely a function of
/// (texture_seed, palette), so re-texturing never moves geometry.
class TextureSet {
public:
    TextureSet(std::uint64_t texture_seed, int palette)
        : seed_(texture_seed), palette_(palette) {
        Rng r = SeededRng(texture_seed).derive("palette", static_cast<std::uint64_t>(palette))
                    .stream("tint");
        for (auto& t : class_tint_)
            t = 0.85 + 0.3 * r.uniform01();
        hue_shift_ = r.uniform(-0.06, 0.06);
    }

    std::uint64_t seed() const { return seed_; }

    ColorF ground(LandCover cls, Vec2 world) const {
        const ColorF base = base_color(cls);
        const double freq = cls == LandCover::Agriculture ? 0.12 : 0.35;
        double n = scenegen::noise::fbm2(class_seed(cls), world.x * freq, world.y * freq, 4);
        if (cls == LandCover::Agriculture) {
            // furrow striping
            const double stripe = 0.5 + 0.5 * std::sin(world.x * 0.9 + world.y * 0.25);
            n = 0.6 * n + 0.4 * stripe;
        }
        const double m = 0.75 + 0.5 * n;
        return tinted(cls, base.scaled(m));
    }

    ColorF roof(int texture_id, Vec2 world) const {
        static constexpr ColorF kRoofBases[4] = {
            {0.55, 0.28, 0.22}, {0.5, 0.5, 0.52}, {0.62, 0.55, 0.45}, {0.35, 0.38, 0.42}};
        const ColorF base = kRoofBases[texture_id & 3];
        const double n =
            scenegen::noise::fbm2(object_seed(texture_id), world.x * 0.8, world.y * 0.8, 3);
        return base.scaled(0.8 + 0.4 * n);
    }

    ColorF wall(int texture_id) const {
        const double v = 0.45 + 0.35 * hash01(object_seed(texture_id));
        return {v, v * 0.97, v * 0.9};
    }

    ColorF canopy(int texture_id, Vec2 world) const {
        const double n =
            scenegen::noise::fbm2(object_seed(texture_id ^ 0x5a5a), world.x * 1.3, world.y * 1.3, 3);
        const double t = hash01(object_seed(texture_id));
        return ColorF{0.12 + 0.1 * t, 0.38 + 0.2 * t, 0.12 + 0.08 * t}.scaled(0.7 + 0.6 * n);
    }

    ColorF trunk() const { return {0.32, 0.24, 0.16}; }

private:
    ColorF base_color(LandCover cls) const {
        switch (cls) {
        case LandCover::Bareland: return {0.58, 0.47, 0.36};
        case LandCover::Rangeland: return {0.48, 0.58, 0.34};
        case LandCover::DevelopedSpace: return {0.62, 0.6, 0.58};
        case LandCover::Road: return {0.3, 0.3, 0.32};
        case LandCover::Water: return {0.15, 0.3, 0.52};
        case LandCover::Agriculture: return {0.58, 0.52, 0.28};
        default: return {0.5, 0.5, 0.5};
        }
    }

    ColorF tinted(LandCover cls, ColorF c) const {
        const double t = class_tint_[static_cast<int>(cls)];
        return {std::clamp(c.r * t + hue_shift_ * 0.2, 0.0, 1.0),
                std::clamp(c.g * t, 0.0, 1.0),
                std::clamp(c.b * t - hue_shift_ * 0.2, 0.0, 1.0)};
    }

    std::uint64_t class_seed(LandCover cls) const {
        return splitmix64(seed_ ^ (0x9e37u + static_cast<std::uint64_t>(cls) * 1315423911ULL));
    }

    std::uint64_t object_seed(int id) const {
        return splitmix64(seed_ ^ (static_cast<std::uint64_t>(id) * 0x9e3779b97f4a7c15ULL));
    }

    static double hash01(std::uint64_t h) { return static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53; }

    std::uint64_t seed_;
    int palette_;
    double class_tint_[kNumClasses] = {};
    double hue_shift_ = 0.0;
};

/// Texture pass from the generation workflow: the returned scene renders
/// with materials keyed by texture_seed; geometry and labels are untouched.
inline scenegen::Scene apply_textures(const scenegen::Scene& scene, std::uint64_t texture_seed) {
    scenegen::Scene out = scene;
    out.texture_seed = texture_seed;
    return out;
}

} // namespace geosynth::render
