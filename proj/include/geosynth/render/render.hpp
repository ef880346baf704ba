#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geosynth/core/geometry.hpp"
#include "geosynth/core/raster.hpp"
#include "geosynth/paramgen/plan.hpp"
#include "geosynth/render/camera.hpp"
#include "geosynth/render/palette.hpp"
#include "geosynth/render/texture.hpp"
#include "geosynth/scenegen/scene.hpp"

namespace geosynth::render {

/// Aligned per-tile outputs. ndsm is height above local ground in meters,
/// exactly 0 wherever the label is not Tree or Building.
struct RasterStack {
    ImageRgb rgb;
    LabelRaster label;
    HeightRaster ndsm;
    MaskRaster building_mask; // 0/1

    struct Meta {
        double gsd = 0.0;
        std::uint64_t seed = 0;
        std::string style;
    } meta;
};

/// post AND NOT pre: pixels where a building vanished between the events.
inline MaskRaster change_mask(const MaskRaster& post_mask, const MaskRaster& pre_mask) {
    require_same_shape(post_mask, pre_mask, "change_mask");
    MaskRaster out(post_mask.width(), post_mask.height(), 0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (post_mask[i] != 0 && pre_mask[i] == 0) ? 1 : 0;
    return out;
}

namespace detail {

enum class HitKind : std::uint8_t { Ground = 0, Tree = 1, Building = 2 };

struct Hit {
    double s = std::numeric_limits<double>::infinity(); // ray parameter, smaller = first
    Vec3 point;
    Vec3 normal{0.0, 0.0, 1.0};
    HitKind kind = HitKind::Ground;
    int object = -1; // building/tree index
    int sub = 0;     // 0 roof/canopy, 1 wall/trunk
};

inline int kind_priority(HitKind k) {
    switch (k) {
    case HitKind::Building: return 2;
    case HitKind::Tree: return 1;
    case HitKind::Ground: return 0;
    }
    return 0;
}

/// First-surface comparison: nearest along the ray; coincident hits resolve
/// higher z first, then Building > Tree > ground.
inline bool hit_better(const Hit& a, const Hit& b) {
    if (a.s != b.s)
        return a.s < b.s;
    if (a.point.z != b.point.z)
        return a.point.z > b.point.z;
    return kind_priority(a.kind) > kind_priority(b.kind);
}

struct Ray {
    Vec3 origin; // at z = z_top
    Vec3 dir;    // unit, dir.z < 0
};

/// Ray/building-part intersection in the rect's local frame. The part is a
/// prism capped by a flat or gable roof; the base extends below ground so
/// the bottom face is never visible.
inline void intersect_part(const scenegen::Building& b, const OrientedRect& part, const Ray& ray,
                           int object_index, Hit& best) {
    const Vec2 u = part.axis_u();
    const Vec2 v = part.axis_v();
    const Vec2 o_xy{ray.origin.x, ray.origin.y};
    const Vec2 ol = part.to_local(o_xy);
    const double du = ray.dir.x * u.x + ray.dir.y * u.y;
    const double dv = ray.dir.x * v.x + ray.dir.y * v.y;
    const double oz = ray.origin.z;
    const double dz = ray.dir.z;

    const double eave_z = b.base_z + b.height;
    const double bottom_z = b.base_z - 5.0;
    const bool gable = b.roof == scenegen::RoofKind::Gable && b.parts.size() == 1;
    // gable ridge runs along the longer local axis
    const bool ridge_along_u = part.half_u >= part.half_v;
    const double half_m = ridge_along_u ? part.half_v : part.half_u;
    const double half_n = ridge_along_u ? part.half_u : part.half_v;
    const double tan_a = gable ? std::tan(b.roof_angle_deg * std::numbers::pi / 180.0) : 0.0;

    const auto local_m = [&](double s) { return ridge_along_u ? ol.y + s * dv : ol.x + s * du; };
    const auto local_n = [&](double s) { return ridge_along_u ? ol.x + s * du : ol.y + s * dv; };
    const auto roof_z_at = [&](double m) { return eave_z + tan_a * (half_m - std::abs(m)); };

    const auto consider = [&](double s, Vec3 normal, int sub) {
        if (!(s > 0.0) || !std::isfinite(s))
            return;
        Hit h;
        h.s = s;
        h.point = ray.origin + ray.dir * s;
        h.normal = normal;
        h.kind = HitKind::Building;
        h.object = object_index;
        h.sub = sub;
        if (hit_better(h, best))
            best = h;
    };

    if (!gable) {
        // flat roof plane z = eave_z
        if (dz != 0.0) {
            const double s = (eave_z - oz) / dz;
            const double mu = ol.x + s * du;
            const double mv = ol.y + s * dv;
            if (std::abs(mu) <= part.half_u && std::abs(mv) <= part.half_v)
                consider(s, {0.0, 0.0, 1.0}, 0);
        }
    } else {
        // two roof planes: z = eave_z + tan*(half_m -+ m)
        const Vec2 m_axis = ridge_along_u ? v : u;
        for (int side = 0; side < 2; ++side) {
            const double sgn = side == 0 ? 1.0 : -1.0; // m >= 0 half vs m <= 0 half
            const double denom = dz + sgn * tan_a * (ridge_along_u ? dv : du);
            if (denom == 0.0)
                continue;
            const double m0 = ridge_along_u ? ol.y : ol.x;
            const double s = (eave_z + tan_a * half_m - oz - sgn * tan_a * m0) / denom;
            const double m = local_m(s);
            const double n = local_n(s);
            if (sgn * m < -1e-12 || std::abs(m) > half_m + 1e-12 || std::abs(n) > half_n)
                continue;
            Vec3 normal{sgn * tan_a * m_axis.x, sgn * tan_a * m_axis.y, 1.0};
            consider(s, normalized(normal), 0);
        }
    }

    // walls
    const auto wall = [&](double plane, bool along_u) {
        const double dcomp = along_u ? du : dv;
        if (dcomp == 0.0)
            return;
        const double ocomp = along_u ? ol.x : ol.y;
        const double s = (plane - ocomp) / dcomp;
        if (!(s > 0.0))
            return;
        const double other = along_u ? ol.y + s * dv : ol.x + s * du;
        const double other_half = along_u ? part.half_v : part.half_u;
        if (std::abs(other) > other_half)
            return;
        const double z = oz + s * dz;
        const double m = local_m(s);
        const double top = gable ? roof_z_at(std::clamp(m, -half_m, half_m)) : eave_z;
        if (z < bottom_z || z > top)
            return;
        const Vec2 axis = along_u ? u : v;
        const double sgn = plane > 0.0 ? 1.0 : -1.0;
        consider(s, {sgn * axis.x, sgn * axis.y, 0.0}, 1);
    };
    wall(part.half_u, true);
    wall(-part.half_u, true);
    wall(part.half_v, false);
    wall(-part.half_v, false);
}

inline void intersect_tree(const scenegen::Tree& t, const Ray& ray, int object_index, Hit& best) {
    const auto consider = [&](double s, Vec3 normal, int sub) {
        if (!(s > 0.0) || !std::isfinite(s))
            return;
        Hit h;
        h.s = s;
        h.point = ray.origin + ray.dir * s;
        h.normal = normal;
        h.kind = HitKind::Tree;
        h.object = object_index;
        h.sub = sub;
        if (hit_better(h, best))
            best = h;
    };

    // canopy ellipsoid
    {
        const Vec3 c{t.pos.x, t.pos.y, t.base_z + t.canopy_cz};
        const double ir = 1.0 / t.canopy_r;
        const double iv = 1.0 / t.canopy_rv;
        const Vec3 o{(ray.origin.x - c.x) * ir, (ray.origin.y - c.y) * ir,
                     (ray.origin.z - c.z) * iv};
        const Vec3 d{ray.dir.x * ir, ray.dir.y * ir, ray.dir.z * iv};
        const double A = dot(d, d);
        const double B = 2.0 * dot(o, d);
        const double C = dot(o, o) - 1.0;
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double s = (-B - std::sqrt(disc)) / (2.0 * A);
            if (s > 0.0) {
                const Vec3 p = ray.origin + ray.dir * s;
                const Vec3 n{(p.x - c.x) * ir * ir, (p.y - c.y) * ir * ir, (p.z - c.z) * iv * iv};
                consider(s, normalized(n), 0);
            }
        }
    }
    // trunk cylinder
    {
        const double ox = ray.origin.x - t.pos.x;
        const double oy = ray.origin.y - t.pos.y;
        const double A = ray.dir.x * ray.dir.x + ray.dir.y * ray.dir.y;
        if (A > 1e-16) {
            const double B = 2.0 * (ox * ray.dir.x + oy * ray.dir.y);
            const double C = ox * ox + oy * oy - t.trunk_r * t.trunk_r;
            const double disc = B * B - 4.0 * A * C;
            if (disc >= 0.0) {
                const double s = (-B - std::sqrt(disc)) / (2.0 * A);
                const double z = ray.origin.z + s * ray.dir.z;
                if (s > 0.0 && z >= t.base_z && z <= t.base_z + t.trunk_h) {
                    const Vec3 p = ray.origin + ray.dir * s;
                    consider(s, normalized({p.x - t.pos.x, p.y - t.pos.y, 0.0}), 1);
                }
            }
        }
    }
}

/// Anchor-space uniform grid over object footprints, accounting for the
/// oblique shear between a point and the pixel that sees it.
class BinGrid {
public:
    BinGrid(double extent, int bins) : extent_(extent), bins_(bins), cells_(bins * bins) {}

    void insert(const Bounds2& anchor_box, int payload) {
        int i0, i1, j0, j1;
        range(anchor_box, i0, i1, j0, j1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                cells_[static_cast<std::size_t>(j) * bins_ + i].push_back(payload);
    }

    const std::vector<int>& candidates(Vec2 anchor) const {
        const int i = std::clamp(static_cast<int>(anchor.x / extent_ * bins_), 0, bins_ - 1);
        const int j = std::clamp(static_cast<int>(anchor.y / extent_ * bins_), 0, bins_ - 1);
        return cells_[static_cast<std::size_t>(j) * bins_ + i];
    }

private:
    void range(const Bounds2& b, int& i0, int& i1, int& j0, int& j1) const {
        i0 = std::clamp(static_cast<int>(b.min_x / extent_ * bins_), 0, bins_ - 1);
        i1 = std::clamp(static_cast<int>(b.max_x / extent_ * bins_), 0, bins_ - 1);
        j0 = std::clamp(static_cast<int>(b.min_y / extent_ * bins_), 0, bins_ - 1);
        j1 = std::clamp(static_cast<int>(b.max_y / extent_ * bins_), 0, bins_ - 1);
    }

    double extent_;
    int bins_;
    std::vector<std::vector<int>> cells_;
};

/// Sweep a world-space xy box through a z interval into anchor space.
inline Bounds2 sweep_anchor_box(const Bounds2& xy, double z_lo, double z_hi, Vec2 shear) {
    Bounds2 out = xy;
    for (double z : {z_lo, z_hi}) {
        out.expand({xy.min_x + shear.x * z, xy.min_y + shear.y * z});
        out.expand({xy.max_x + shear.x * z, xy.max_y + shear.y * z});
    }
    return out;
}

inline Hit intersect_terrain(const scenegen::Heightfield& terrain, const Ray& ray, bool nadir,
                             Vec2 anchor, double z_top) {
    Hit h;
    h.kind = HitKind::Ground;
    if (nadir) {
        const double z = terrain.sample(anchor.x, anchor.y);
        h.point = {anchor.x, anchor.y, z};
        h.s = (z_top - z) / -ray.dir.z;
        return h;
    }
    const double tmin = terrain.min_elevation();
    const double tmax = terrain.max_elevation();
    const double horiz = std::hypot(ray.dir.x, ray.dir.y);
    const double step_s = std::max(0.5 * terrain.cell_size() / std::max(horiz, 1e-9),
                                   0.25 * terrain.cell_size());
    double s0 = (z_top - (tmax + 1.0)) / -ray.dir.z;
    const double s_end = (z_top - (tmin - 1.0)) / -ray.dir.z;
    double prev_s = std::max(0.0, s0);
    Vec3 p = ray.origin + ray.dir * prev_s;
    double prev_diff = p.z - terrain.sample(p.x, p.y);
    for (double s = prev_s + step_s;; s += step_s) {
        const bool last = s >= s_end;
        const double sc = last ? s_end : s;
        p = ray.origin + ray.dir * sc;
        const double diff = p.z - terrain.sample(p.x, p.y);
        if (diff <= 0.0) {
            // bracketed: bisect
            double lo = prev_s, hi = sc;
            for (int it = 0; it < 32; ++it) {
                const double mid = 0.5 * (lo + hi);
                const Vec3 q = ray.origin + ray.dir * mid;
                if (q.z - terrain.sample(q.x, q.y) <= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            const Vec3 q = ray.origin + ray.dir * hi;
            h.point = {q.x, q.y, terrain.sample(q.x, q.y)};
            h.s = hi;
            return h;
        }
        prev_s = sc;
        prev_diff = diff;
        if (last)
            break;
    }
    // fell past the terrain envelope; clamp to the lowest sample
    (void)prev_diff;
    p = ray.origin + ray.dir * s_end;
    h.point = {p.x, p.y, terrain.sample(p.x, p.y)};
    h.s = s_end;
    return h;
}

inline Vec3 terrain_normal(const scenegen::Heightfield& terrain, double x, double y) {
    const double d = terrain.cell_size();
    const double zx = terrain.sample(x + d, y) - terrain.sample(x - d, y);
    const double zy = terrain.sample(x, y + d) - terrain.sample(x, y - d);
    return normalized({-zx / (2.0 * d), -zy / (2.0 * d), 1.0});
}

inline std::uint8_t to_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
}

} // namespace detail

/// Orthographic ray-cast of the scene through the camera: first surface per
/// pixel decides class and color; ndsm is hit height above the terrain
/// directly beneath the hit point, clamped at 0.
inline RasterStack render(const scenegen::Scene& scene, const Camera& camera,
                          const paramgen::SunParams& sun) {
    using namespace detail;
    const int size = camera.image_size();
    RasterStack stack;
    stack.rgb = ImageRgb(size, size);
    stack.label = LabelRaster(size, size, static_cast<std::uint8_t>(LandCover::Bareland));
    stack.ndsm = HeightRaster(size, size, 0.0f);
    stack.building_mask = MaskRaster(size, size, 0);
    stack.meta.gsd = camera.gsd();
    stack.meta.seed = scene.plan.seed;
    stack.meta.style = scene.plan.style_name;

    const Vec3 dir = camera.view_dir();
    const bool nadir = std::abs(dir.x) < 1e-12 && std::abs(dir.y) < 1e-12;
    const Vec2 shear{-dir.x / dir.z, -dir.y / dir.z};

    double z_top = scene.terrain.max_elevation() + 2.0;
    for (const auto& b : scene.buildings)
        z_top = std::max(z_top, b.top_z() + 2.0);
    for (const auto& t : scene.trees)
        z_top = std::max(z_top, t.base_z + t.total_height() + 2.0);

    // candidate index in anchor space: payload >= 0 is a building part,
    // payload < 0 encodes tree index -(i+1)
    struct PartRef {
        int building;
        int part;
    };
    std::vector<PartRef> part_refs;
    BinGrid grid(camera.footprint(), std::max(16, size / 4));
    for (std::size_t bi = 0; bi < scene.buildings.size(); ++bi) {
        const auto& b = scene.buildings[bi];
        for (std::size_t pi = 0; pi < b.parts.size(); ++pi) {
            const Polygon corners = b.parts[pi].corners();
            const Bounds2 xy = Bounds2::of(corners);
            const Bounds2 swept = sweep_anchor_box(xy, b.base_z - 5.0, b.top_z(), shear);
            grid.insert(swept, static_cast<int>(part_refs.size()));
            part_refs.push_back({static_cast<int>(bi), static_cast<int>(pi)});
        }
    }
    for (std::size_t ti = 0; ti < scene.trees.size(); ++ti) {
        const auto& t = scene.trees[ti];
        Bounds2 xy{t.pos.x - t.canopy_r, t.pos.y - t.canopy_r, t.pos.x + t.canopy_r,
                   t.pos.y + t.canopy_r};
        const Bounds2 swept =
            sweep_anchor_box(xy, t.base_z, t.base_z + t.total_height(), shear);
        grid.insert(swept, -(static_cast<int>(ti) + 1));
    }

    const TextureSet textures(scene.texture_seed, scene.plan.palette);

    // sun from a fixed north-west azimuth at the sampled elevation
    const double sun_az = 315.0 * std::numbers::pi / 180.0;
    const double sun_el = sun.elevation_deg * std::numbers::pi / 180.0;
    const Vec3 sun_dir{std::sin(sun_az) * std::cos(sun_el), std::cos(sun_az) * std::cos(sun_el),
                       std::sin(sun_el)};

    for (int py = 0; py < size; ++py) {
        for (int px = 0; px < size; ++px) {
            const Vec2 g = camera.pixel_to_ground(px, py);
            Ray ray;
            ray.dir = dir;
            ray.origin = {g.x + shear.x * z_top, g.y + shear.y * z_top, z_top};

            Hit best = intersect_terrain(scene.terrain, ray, nadir, g, z_top);
            best.normal = terrain_normal(scene.terrain, best.point.x, best.point.y);

            for (int payload : grid.candidates(g)) {
                if (payload >= 0) {
                    const PartRef ref = part_refs[static_cast<std::size_t>(payload)];
                    const auto& b = scene.buildings[static_cast<std::size_t>(ref.building)];
                    intersect_part(b, b.parts[static_cast<std::size_t>(ref.part)], ray,
                                   ref.building, best);
                } else {
                    const int ti = -payload - 1;
                    intersect_tree(scene.trees[static_cast<std::size_t>(ti)], ray, ti, best);
                }
            }

            LandCover cls;
            float height = 0.0f;
            ColorF albedo;
            switch (best.kind) {
            case HitKind::Ground: {
                cls = zone_class(scene.parcels.zone_at(best.point.x, best.point.y));
                albedo = textures.ground(cls, {best.point.x, best.point.y});
                height = 0.0f;
                break;
            }
            case HitKind::Building: {
                cls = LandCover::Building;
                const auto& b = scene.buildings[static_cast<std::size_t>(best.object)];
                albedo = best.sub == 0 ? textures.roof(b.texture_id, {best.point.x, best.point.y})
                                       : textures.wall(b.texture_id);
                const double ground = scene.terrain.sample(best.point.x, best.point.y);
                height = static_cast<float>(std::max(0.0, best.point.z - ground));
                break;
            }
            case HitKind::Tree:
            default: {
                cls = LandCover::Tree;
                const auto& t = scene.trees[static_cast<std::size_t>(best.object)];
                albedo = best.sub == 0 ? textures.canopy(t.texture_id, {best.point.x, best.point.y})
                                       : textures.trunk();
                const double ground = scene.terrain.sample(best.point.x, best.point.y);
                height = static_cast<float>(std::max(0.0, best.point.z - ground));
                break;
            }
            }

            const double diffuse = std::max(0.0, dot(best.normal, sun_dir));
            const double lit = (0.3 + 0.7 * diffuse) * sun.intensity;
            stack.rgb.at(px, py) = {detail::to_u8(albedo.r * lit * sun.color[0]),
                                    detail::to_u8(albedo.g * lit * sun.color[1]),
                                    detail::to_u8(albedo.b * lit * sun.color[2])};
            stack.label.at(px, py) = static_cast<std::uint8_t>(cls);
            stack.ndsm.at(px, py) = height;
            stack.building_mask.at(px, py) = best.kind == HitKind::Building ? 1 : 0;
        }
    }
    return stack;
}

/// Renders the post/pre pair with one camera and sun. Each scene carries its
/// own texture seed (the pre-event pass is independently re-textured).
inline std::pair<RasterStack, RasterStack> render_pair(const scenegen::Scene& post,
                                                       const scenegen::Scene& pre,
                                                       const Camera& camera,
                                                       const paramgen::SunParams& sun) {
    return {render(post, camera, sun), render(pre, camera, sun)};
}

} // namespace geosynth::render
