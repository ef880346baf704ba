#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "geosynth/core/geometry.hpp"
#include "geosynth/core/rng.hpp"
#include "geosynth/paramgen/plan.hpp"
#include "geosynth/scenegen/heightfield.hpp"
#include "geosynth/scenegen/layout.hpp"

namespace geosynth::scenegen {

enum class RoofKind : std::uint8_t { Flat, Gable };

/// A building is one or two axis-bonded rectangular prisms (rect or L-shape)
/// with a shared base elevation and eave height.
struct Building {
    int id = 0;
    std::vector<OrientedRect> parts; // 1 = rect, 2 = L-shape
    Polygon footprint;               // simple, counter-clockwise, world frame
    double base_z = 0.0;
    double height = 0.0; // to eave, meters above base_z
    RoofKind roof = RoofKind::Flat;
    double roof_angle_deg = 0.0; // gable pitch; 0 for flat
    int texture_id = 0;

    /// Ridge rise above the eave (gable roofs on single-rect parts only).
    double ridge_rise() const {
        if (roof != RoofKind::Gable || parts.size() != 1)
            return 0.0;
        const double half = std::min(parts[0].half_u, parts[0].half_v);
        return std::tan(roof_angle_deg * std::numbers::pi / 180.0) * half;
    }

    double top_z() const { return base_z + height + ridge_rise(); }
};

struct Tree {
    Vec2 pos;
    double base_z = 0.0;
    double trunk_h = 3.0;
    double trunk_r = 0.2;
    double canopy_r = 2.0;  // horizontal semi-axis
    double canopy_rv = 2.0; // vertical semi-axis
    double canopy_cz = 4.0; // canopy center above base_z
    int texture_id = 0;

    double total_height() const { return canopy_cz + canopy_rv; }
};

struct Scene {
    paramgen::ScenePlan plan;
    Heightfield terrain;
    ParcelMap parcels;
    std::vector<Building> buildings;
    std::vector<Tree> trees;
    std::uint64_t texture_seed = 0;
    std::vector<int> removed_ids; // filled on pre-event scenes
};

namespace detail {

/// Separating-axis overlap between an oriented rect and an axis-aligned cell
/// box; used as a conservative footprint->cells cover.
inline bool rect_overlaps_cell(const OrientedRect& r, double x0, double y0, double x1, double y1) {
    const Vec2 bc{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    const double bhx = 0.5 * (x1 - x0);
    const double bhy = 0.5 * (y1 - y0);
    const Vec2 u = r.axis_u();
    const Vec2 v = r.axis_v();
    const Vec2 d = bc - r.center;

    const double rx = r.half_u * std::abs(u.x) + r.half_v * std::abs(v.x);
    if (std::abs(d.x) > rx + bhx)
        return false;
    const double ry = r.half_u * std::abs(u.y) + r.half_v * std::abs(v.y);
    if (std::abs(d.y) > ry + bhy)
        return false;
    const double bu = bhx * std::abs(u.x) + bhy * std::abs(u.y);
    if (std::abs(dot(d, u)) > r.half_u + bu)
        return false;
    const double bv = bhx * std::abs(v.x) + bhy * std::abs(v.y);
    if (std::abs(dot(d, v)) > r.half_v + bv)
        return false;
    return true;
}

/// True when every cell the rect touches is a Lot cell of the given district.
inline bool rect_fits_lot(const ParcelMap& parcels, const OrientedRect& r, std::int16_t d) {
    const double cell = parcels.cell_size();
    const int res = parcels.resolution();
    const Polygon corners = r.corners();
    Bounds2 bb = Bounds2::of(corners);
    const int i0 = static_cast<int>(std::floor(bb.min_x / cell));
    const int i1 = static_cast<int>(std::floor(bb.max_x / cell));
    const int j0 = static_cast<int>(std::floor(bb.min_y / cell));
    const int j1 = static_cast<int>(std::floor(bb.max_y / cell));
    if (i0 < 0 || j0 < 0 || i1 >= res || j1 >= res)
        return false;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            if (!rect_overlaps_cell(r, i * cell, j * cell, (i + 1) * cell, (j + 1) * cell))
                continue;
            if (parcels.zone(i, j) != Zone::Lot || parcels.district(i, j) != d)
                return false;
        }
    }
    return true;
}

inline Polygon lshape_footprint(const OrientedRect& full, double cu, double cv) {
    const double hu = full.half_u;
    const double hv = full.half_v;
    Polygon local{{-hu, -hv}, {hu, -hv},       {hu, hv - cv},
                  {hu - cu, hv - cv}, {hu - cu, hv}, {-hu, hv}};
    Polygon world;
    world.reserve(local.size());
    for (const Vec2& p : local)
        world.push_back(full.to_world(p));
    return world;
}

} // namespace detail

/// Places buildings on lot districts (grid-packed, interior-disjoint by
/// construction) and trees on forest/rangeland sites, then samples their
/// attributes. Pure in the plan: identical plans give identical scenes.
inline Scene populate_scene(const paramgen::ScenePlan& plan, const Heightfield& terrain,
                            const ParcelMap& parcels) {
    Scene scene;
    scene.plan = plan;
    scene.terrain = terrain;
    scene.parcels = parcels;

    const SeededRng root = SeededRng(plan.seed).derive("populate");
    const int res = parcels.resolution();
    const double cell = parcels.cell_size();

    // per-district bounding boxes of lot cells
    struct DistrictBox {
        int i0 = 1 << 30, j0 = 1 << 30, i1 = -1, j1 = -1;
        bool empty() const { return i1 < 0; }
    };
    std::vector<DistrictBox> boxes(static_cast<std::size_t>(parcels.district_count()));
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            const std::int16_t d = parcels.district(i, j);
            if (d < 0 || parcels.zone(i, j) != Zone::Lot)
                continue;
            auto& b = boxes[static_cast<std::size_t>(d)];
            b.i0 = std::min(b.i0, i);
            b.j0 = std::min(b.j0, j);
            b.i1 = std::max(b.i1, i);
            b.j1 = std::max(b.j1, j);
        }
    }

    Rng brng = root.stream("buildings");
    int next_id = 0;
    for (std::size_t d = 0; d < boxes.size(); ++d) {
        const auto& box = boxes[d];
        if (box.empty())
            continue;
        const double angle = brng.uniform(0.0, std::numbers::pi / 2.0);
        const double side = brng.uniform(plan.building.side.lo, plan.building.side.hi);
        const double density = std::max(plan.grid.obj_density, 1e-3);
        const double pitch = std::max(side / std::sqrt(density), side + 2.5);

        const Vec2 center{(box.i0 + box.i1 + 1) * 0.5 * cell, (box.j0 + box.j1 + 1) * 0.5 * cell};
        const double span_x = (box.i1 - box.i0 + 1) * cell;
        const double span_y = (box.j1 - box.j0 + 1) * cell;
        const double radius = 0.5 * std::hypot(span_x, span_y);
        const int steps = static_cast<int>(std::ceil(radius / pitch));
        const Vec2 u{std::cos(angle), std::sin(angle)};
        const Vec2 v{-std::sin(angle), std::cos(angle)};

        for (int l = -steps; l <= steps; ++l) {
            for (int k = -steps; k <= steps; ++k) {
                const Vec2 pos = center + u * (k * pitch) + v * (l * pitch);
                // attribute draws happen for every lattice site so placement
                // failures do not shift later buildings' attributes
                double w = side * brng.uniform(0.85, 1.15);
                double aspect = 1.0;
                switch (plan.building.type) {
                case paramgen::BuildingType::Compact: aspect = brng.uniform(0.9, 1.1); break;
                case paramgen::BuildingType::Mixed: aspect = brng.uniform(0.8, 1.6); break;
                case paramgen::BuildingType::Slab: aspect = brng.uniform(1.4, 2.2); break;
                }
                double len = w * aspect;
                const double height = brng.uniform(plan.building.height.lo, plan.building.height.hi);
                const bool lshape = brng.bernoulli(plan.building.lshape_prob);
                const bool gable = !lshape && brng.bernoulli(plan.building.gable_prob);
                const double roof_angle =
                    brng.uniform(plan.building.roof_angle.lo, plan.building.roof_angle.hi);
                const double cut_u = brng.uniform(0.35, 0.6);
                const double cut_v = brng.uniform(0.35, 0.6);
                const int texture_id = static_cast<int>(brng.randint(0, 255));

                const double max_dim = pitch - 2.0;
                if (max_dim < 3.0)
                    continue;
                w = std::min(w, max_dim);
                len = std::min(len, max_dim);
                if (w < 3.0 || len < 3.0)
                    continue;

                OrientedRect full{pos, 0.5 * w, 0.5 * len, angle};
                if (!detail::rect_fits_lot(scene.parcels, full, static_cast<std::int16_t>(d)))
                    continue;

                Building b;
                b.id = next_id++;
                b.base_z = terrain.sample(pos.x, pos.y);
                b.height = height;
                b.texture_id = texture_id;
                if (lshape) {
                    const double cu = cut_u * w;
                    const double cv = cut_v * len;
                    b.footprint = detail::lshape_footprint(full, cu, cv);
                    OrientedRect lower = full;
                    lower.center = full.to_world({0.0, -0.5 * cv});
                    lower.half_v = full.half_v - 0.5 * cv;
                    OrientedRect upper = full;
                    upper.center = full.to_world({-0.5 * cu, full.half_v - 0.5 * cv});
                    upper.half_u = full.half_u - 0.5 * cu;
                    upper.half_v = 0.5 * cv;
                    b.parts = {lower, upper};
                    b.roof = RoofKind::Flat;
                } else {
                    b.footprint = full.corners();
                    b.parts = {full};
                    b.roof = gable ? RoofKind::Gable : RoofKind::Flat;
                    b.roof_angle_deg = gable ? roof_angle : 0.0;
                }
                scene.buildings.push_back(std::move(b));
            }
        }
    }

    // trees on a fixed 4 m site grid over eligible zones
    Rng trng = root.stream("trees");
    const double site_pitch = 4.0;
    const double extent = res * cell;
    const int sites = std::max(1, static_cast<int>(extent / site_pitch));
    for (int sj = 0; sj < sites; ++sj) {
        for (int si = 0; si < sites; ++si) {
            const Vec2 site{(si + 0.5) * site_pitch, (sj + 0.5) * site_pitch};
            const Zone z = parcels.zone_at(site.x, site.y);
            if (z != Zone::Forest && z != Zone::Rangeland)
                continue;
            if (!trng.bernoulli(plan.terrain.tree_density))
                continue;
            Tree t;
            t.pos = {site.x + trng.uniform(-1.2, 1.2), site.y + trng.uniform(-1.2, 1.2)};
            t.base_z = terrain.sample(t.pos.x, t.pos.y);
            t.trunk_h = trng.uniform(2.0, 5.0);
            t.trunk_r = trng.uniform(0.12, 0.3);
            const double branch_boost = 1.0 + 0.03 * (plan.tree.branch_num - 6);
            t.canopy_r = std::max(0.8, trng.uniform(1.5, 3.0) * branch_boost);
            t.canopy_rv = t.canopy_r * trng.uniform(0.8, 1.4);
            t.canopy_cz = t.trunk_h + 0.7 * t.canopy_rv;
            t.texture_id = static_cast<int>(trng.randint(0, 255));
            scene.trees.push_back(t);
        }
    }

    return scene;
}

/// Pre-event variant: a uniformly sampled subset of round((1-f)*N) buildings
/// survives; terrain, parcels and trees are shared unchanged.
inline Scene derive_pre_event(const Scene& scene, double removal_fraction, std::uint64_t seed) {
    Scene pre = scene;
    const std::size_t n = scene.buildings.size();
    const auto keep =
        static_cast<std::size_t>(std::llround((1.0 - removal_fraction) * static_cast<double>(n)));
    const std::size_t remove = n - std::min(keep, n);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    Rng rng = SeededRng(seed).stream("pre_event_removal");
    for (std::size_t i = 0; i < remove; ++i) {
        const auto j = static_cast<std::size_t>(
            rng.randint(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n) - 1));
        std::swap(order[i], order[j]);
    }
    std::vector<bool> removed(n, false);
    pre.removed_ids.clear();
    for (std::size_t i = 0; i < remove; ++i) {
        removed[order[i]] = true;
        pre.removed_ids.push_back(scene.buildings[order[i]].id);
    }
    std::sort(pre.removed_ids.begin(), pre.removed_ids.end());

    pre.buildings.clear();
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i])
            pre.buildings.push_back(scene.buildings[i]);
    return pre;
}

} // namespace geosynth::scenegen
