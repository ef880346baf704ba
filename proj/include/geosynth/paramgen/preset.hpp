#pragma once

#include <string>
#include <vector>

#include "geosynth/core/error.hpp"

namespace geosynth::paramgen {

/// Building-height regime. World-area prior weights: 12% low, 70% mid,
/// 18% tall.
enum class HeightRegime { Low, Mid, Tall };

inline constexpr double kRegimeWeights[3] = {0.12, 0.70, 0.18};

inline const char* regime_name(HeightRegime r) {
    switch (r) {
    case HeightRegime::Low: return "low";
    case HeightRegime::Mid: return "mid";
    case HeightRegime::Tall: return "tall";
    }
    return "?";
}

inline HeightRegime regime_from_name(const std::string& s) {
    if (s == "low") return HeightRegime::Low;
    if (s == "mid") return HeightRegime::Mid;
    if (s == "tall") return HeightRegime::Tall;
    throw ConfigError("unknown height regime: " + s);
}

/// Closed interval used as a uniform-distribution support.
struct Range {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
    double mid() const { return 0.5 * (lo + hi); }
};

/// Inclusive integer support for randint-style draws.
struct IntRange {
    int lo = 0;
    int hi = 0;
};

/// One city style: every distribution bound the generator draws from.
/// The six defaults are abstract (style-0..style-5); all values are
/// config-overridable.
struct StylePreset {
    std::string name;
    HeightRegime regime = HeightRegime::Mid;
    int palette = 0;

    Range building_height{3.0, 40.0}; // meters to eave
    Range building_side{8.0, 20.0};   // footprint side, meters
    Range roof_angle{15.0, 35.0};     // gable pitch, degrees
    double gable_prob = 0.4;
    double lshape_prob = 0.25;

    Range obj_density{0.15, 0.30};  // building coverage inside lots
    Range tree_density{0.05, 0.25}; // occupancy of eligible tree sites
    Range lot_fraction{0.45, 0.65}; // share of districts zoned building-lot

    IntRange district_num{3, 7};
    Range district_size{30.0, 80.0}; // preferred seed spacing, meters

    Range flat_area{0.55, 0.85};
    Range mountain_area{0.05, 0.35};
    Range sea_area{0.0, 0.15};

    IntRange river_num{0, 2};
    IntRange road_num{1, 4};
    Range road_width{4.0, 10.0};

    IntRange tree_branches{3, 9};
    IntRange tree_leaves{50, 400};

    Range removal{0.1, 0.3}; // pre-event building removal fraction

    void validate() const {
        auto check = [&](const Range& r, const char* what) {
            if (!(r.lo <= r.hi))
                throw ConfigError(name + ": invalid range for " + what);
        };
        if (!(building_height.lo > 0.0 && building_height.lo < building_height.hi))
            throw ConfigError(name + ": building height range must be positive with h1 < h2");
        check(building_side, "building_side");
        check(roof_angle, "roof_angle");
        check(obj_density, "obj_density");
        check(tree_density, "tree_density");
        check(lot_fraction, "lot_fraction");
        check(district_size, "district_size");
        check(flat_area, "flat_area");
        check(mountain_area, "mountain_area");
        check(sea_area, "sea_area");
        check(road_width, "road_width");
        if (removal.lo < 0.0 || removal.hi > 1.0 || removal.lo > removal.hi)
            throw ConfigError(name + ": removal fraction range must lie in [0,1]");
        if (district_num.lo < 0 || district_num.lo > district_num.hi)
            throw ConfigError(name + ": invalid district_num range");
    }
};

/// Sensor distribution bounds shared by all styles.
struct SensorBounds {
    Range azimuth{0.0, 360.0};  // degrees
    double look_mean = 0.0;     // degrees off nadir
    double look_std = 5.0;
    Range look_clip{0.0, 25.0};
    double gsd_mean = 0.35; // meters/pixel
    double gsd_std = 0.2;
    Range gsd_clip{0.09, 1.0};
    int image_size = 512;

    void validate() const {
        if (gsd_clip.lo < 0.09 - 1e-12 || gsd_clip.hi > 1.0 + 1e-12 || gsd_clip.lo > gsd_clip.hi)
            throw ConfigError("gsd clip range must lie within [0.09, 1.0]");
        if (look_clip.lo < 0.0 || look_clip.lo > look_clip.hi)
            throw ConfigError("look angle clip range must be nonnegative");
        if (image_size <= 0)
            throw ConfigError("image_size must be positive");
    }
};

struct SunBounds {
    Range elevation{25.0, 80.0}; // degrees above horizon
    Range intensity{0.8, 1.2};
    Range color{0.85, 1.0}; // per-channel support

    void validate() const {
        if (elevation.lo <= 0.0 || elevation.hi > 90.0 || elevation.lo > elevation.hi)
            throw ConfigError("sun elevation range must lie in (0, 90]");
        if (intensity.lo <= 0.0 || intensity.lo > intensity.hi)
            throw ConfigError("sun intensity range must be positive");
    }
};

/// Six built-in styles. Heights per regime bracket real-city statistics:
/// low U(3,12), mid U(3,40), tall U(3,120).
inline std::vector<StylePreset> default_presets() {
    std::vector<StylePreset> out;

    StylePreset low;
    low.name = "style-0";
    low.regime = HeightRegime::Low;
    low.palette = 0;
    low.building_height = {3.0, 12.0};
    low.building_side = {6.0, 14.0};
    low.gable_prob = 0.7;
    low.lshape_prob = 0.2;
    low.obj_density = {0.08, 0.18};
    low.tree_density = {0.10, 0.30};
    low.lot_fraction = {0.30, 0.50};
    low.district_num = {3, 6};
    low.flat_area = {0.45, 0.75};
    low.mountain_area = {0.10, 0.40};
    low.sea_area = {0.0, 0.15};
    low.road_num = {1, 3};
    out.push_back(low);

    auto mid = [&](const char* name, int palette) {
        StylePreset p;
        p.name = name;
        p.regime = HeightRegime::Mid;
        p.palette = palette;
        p.building_height = {3.0, 40.0};
        p.building_side = {8.0, 22.0};
        p.gable_prob = 0.35;
        p.lshape_prob = 0.3;
        p.obj_density = {0.18, 0.32};
        p.tree_density = {0.05, 0.20};
        p.lot_fraction = {0.50, 0.70};
        p.district_num = {3, 7};
        p.flat_area = {0.60, 0.90};
        p.mountain_area = {0.05, 0.30};
        p.sea_area = {0.0, 0.12};
        p.road_num = {2, 5};
        return p;
    };
    out.push_back(mid("style-1", 1));
    out.push_back(mid("style-2", 2));
    {
        StylePreset rural = mid("style-3", 3);
        rural.obj_density = {0.12, 0.25};
        rural.tree_density = {0.10, 0.35};
        rural.lot_fraction = {0.35, 0.55};
        out.push_back(rural);
    }

    auto tall = [&](const char* name, int palette) {
        StylePreset p;
        p.name = name;
        p.regime = HeightRegime::Tall;
        p.palette = palette;
        p.building_height = {3.0, 120.0};
        p.building_side = {14.0, 32.0};
        p.gable_prob = 0.1;
        p.lshape_prob = 0.25;
        p.obj_density = {0.30, 0.45};
        p.tree_density = {0.03, 0.12};
        p.lot_fraction = {0.60, 0.80};
        p.district_num = {4, 8};
        p.flat_area = {0.85, 1.0};
        p.mountain_area = {0.0, 0.10};
        p.sea_area = {0.0, 0.05};
        p.road_num = {2, 6};
        return p;
    };
    out.push_back(tall("style-4", 4));
    out.push_back(tall("style-5", 5));

    for (const auto& p : out)
        p.validate();
    return out;
}

} // namespace geosynth::paramgen
