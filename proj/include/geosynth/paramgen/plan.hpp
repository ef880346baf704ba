#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "geosynth/core/rng.hpp"
#include "geosynth/paramgen/preset.hpp"

namespace geosynth::paramgen {

struct SensorParams {
    double azimuth_deg = 0.0;
    double look_angle_deg = 0.0; // off nadir
    double gsd = 0.35;           // meters/pixel
    int image_size = 512;        // square

    double ground_extent() const { return gsd * image_size; }
};

struct SunParams {
    double elevation_deg = 55.0;
    double intensity = 1.0;
    std::array<double, 3> color{1.0, 1.0, 1.0};
};

struct GridParams {
    int district_num = 4;
    double district_size = 50.0; // meters, preferred district spacing
    double obj_density = 0.25;   // building coverage inside lots
    double lot_fraction = 0.55;  // share of districts zoned building-lot
};

struct TerrainParams {
    double flat_area = 0.7;
    double mountain_area = 0.2;
    double sea_area = 0.1;
    double tree_density = 0.15;
};

struct NetworkParams {
    int river_num = 1;
    int road_num = 2;
    double width = 6.0; // meters, roads and rivers
};

enum class BuildingType { Compact, Mixed, Slab };

inline const char* building_type_name(BuildingType t) {
    switch (t) {
    case BuildingType::Compact: return "compact";
    case BuildingType::Mixed: return "mixed";
    case BuildingType::Slab: return "slab";
    }
    return "?";
}

struct BuildingSpec {
    Range height{3.0, 40.0};     // per-building draw support, meters
    BuildingType type = BuildingType::Mixed;
    Range roof_angle{15.0, 35.0}; // gable pitch support, degrees
    double gable_prob = 0.4;
    double lshape_prob = 0.25;
    Range side{8.0, 20.0}; // footprint side support, meters
};

struct TreeSpec {
    int branch_num = 6;
    int leaf_num = 200;
};

/// All parameters for one tile, fully determined by (style, seed).
struct ScenePlan {
    SensorParams sensor;
    SunParams sun;
    GridParams grid;
    TerrainParams terrain;
    NetworkParams network;
    BuildingSpec building;
    TreeSpec tree;
    double removal_fraction = 0.2;

    std::string style_name;
    HeightRegime regime = HeightRegime::Mid;
    int palette = 0;
    std::uint64_t seed = 0;
};

/// Categorical regime draw with the (0.12, 0.70, 0.18) prior.
inline HeightRegime sample_regime(Rng& rng) {
    const std::size_t k = rng.categorical(std::span<const double>(kRegimeWeights, 3));
    return static_cast<HeightRegime>(k);
}

inline HeightRegime sample_regime(std::uint64_t seed) {
    Rng rng = SeededRng(seed).stream("regime");
    return sample_regime(rng);
}

/// Pure function of (style, seed): each field group draws from its own named
/// substream, so editing one group's bounds never shifts another's draws.
inline ScenePlan sample_scene_plan(const StylePreset& style, std::uint64_t seed,
                                   const SensorBounds& sensor_bounds = {},
                                   const SunBounds& sun_bounds = {}) {
    style.validate();
    sensor_bounds.validate();
    sun_bounds.validate();

    const SeededRng root = SeededRng(seed).derive("plan");
    ScenePlan plan;
    plan.seed = seed;
    plan.style_name = style.name;
    plan.regime = style.regime;
    plan.palette = style.palette;

    {
        Rng r = root.stream("sensor");
        plan.sensor.azimuth_deg = r.uniform(sensor_bounds.azimuth.lo, sensor_bounds.azimuth.hi);
        plan.sensor.look_angle_deg =
            r.normal_clipped(sensor_bounds.look_mean, sensor_bounds.look_std,
                             sensor_bounds.look_clip.lo, sensor_bounds.look_clip.hi);
        plan.sensor.gsd = r.normal_clipped(sensor_bounds.gsd_mean, sensor_bounds.gsd_std,
                                           sensor_bounds.gsd_clip.lo, sensor_bounds.gsd_clip.hi);
        plan.sensor.image_size = sensor_bounds.image_size;
    }
    {
        Rng r = root.stream("sun");
        plan.sun.elevation_deg = r.uniform(sun_bounds.elevation.lo, sun_bounds.elevation.hi);
        plan.sun.intensity = r.uniform(sun_bounds.intensity.lo, sun_bounds.intensity.hi);
        for (double& c : plan.sun.color)
            c = r.uniform(sun_bounds.color.lo, sun_bounds.color.hi);
    }
    {
        Rng r = root.stream("grid");
        plan.grid.district_num =
            static_cast<int>(r.randint(style.district_num.lo, style.district_num.hi));
        plan.grid.district_size = r.uniform(style.district_size.lo, style.district_size.hi);
        plan.grid.obj_density = r.uniform(style.obj_density.lo, style.obj_density.hi);
        plan.grid.lot_fraction = r.uniform(style.lot_fraction.lo, style.lot_fraction.hi);
    }
    {
        Rng r = root.stream("terrain");
        double flat = r.uniform(style.flat_area.lo, style.flat_area.hi);
        double mountain = r.uniform(style.mountain_area.lo, style.mountain_area.hi);
        double sea = r.uniform(style.sea_area.lo, style.sea_area.hi);
        // normalize so the three fractions partition the tile exactly
        const double total = flat + mountain + sea;
        if (total > 0.0) {
            flat /= total;
            mountain /= total;
            sea /= total;
        } else {
            flat = 1.0;
            mountain = sea = 0.0;
        }
        plan.terrain.flat_area = flat;
        plan.terrain.mountain_area = mountain;
        plan.terrain.sea_area = sea;
        plan.terrain.tree_density = r.uniform(style.tree_density.lo, style.tree_density.hi);
    }
    {
        Rng r = root.stream("network");
        plan.network.river_num = static_cast<int>(r.randint(style.river_num.lo, style.river_num.hi));
        plan.network.road_num = static_cast<int>(r.randint(style.road_num.lo, style.road_num.hi));
        plan.network.width = r.uniform(style.road_width.lo, style.road_width.hi);
    }
    {
        Rng r = root.stream("building");
        plan.building.height = style.building_height;
        plan.building.type = static_cast<BuildingType>(r.randint(0, 2));
        plan.building.roof_angle = style.roof_angle;
        plan.building.gable_prob = style.gable_prob;
        plan.building.lshape_prob = style.lshape_prob;
        plan.building.side = style.building_side;
    }
    {
        Rng r = root.stream("tree");
        plan.tree.branch_num = static_cast<int>(r.randint(style.tree_branches.lo, style.tree_branches.hi));
        plan.tree.leaf_num = static_cast<int>(r.randint(style.tree_leaves.lo, style.tree_leaves.hi));
    }
    {
        Rng r = root.stream("removal");
        plan.removal_fraction = r.uniform(style.removal.lo, style.removal.hi);
    }
    return plan;
}

} // namespace geosynth::paramgen
