#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geosynth/core/error.hpp"
#include "geosynth/core/hash.hpp"
#include "geosynth/filter/filter.hpp"
#include "geosynth/paramgen/preset.hpp"

namespace geosynth::pipeline {

inline constexpr const char* kPipelineVersion = "0.1.0";

// texture-seed policy: post/pre texture passes derive from the tile seed
// xor'ed with fixed constants, so re-texturing is reproducible
inline constexpr std::uint64_t kPostTextureSalt = 0x7465787470737400ULL;
inline constexpr std::uint64_t kPreTextureSalt = 0x7465787470726500ULL;

using json = nlohmann::json;

/// Everything one generation run needs. File overrides apply on top of the
/// built-in defaults; the CLI then sets count/seed/out/workers.
struct JobConfig {
    paramgen::SensorBounds sensor;
    paramgen::SunBounds sun;
    filter::FilterParams filter_params;
    std::vector<paramgen::StylePreset> styles = paramgen::default_presets();

    int tile_count = 10;
    std::uint64_t seed = 0;
    std::string output_root;
    int workers = 1;

    void validate() const {
        sensor.validate();
        sun.validate();
        filter_params.validate();
        if (styles.empty())
            throw ConfigError("no style presets configured");
        bool regime_seen[3] = {false, false, false};
        for (const auto& s : styles) {
            s.validate();
            regime_seen[static_cast<int>(s.regime)] = true;
        }
        for (int r = 0; r < 3; ++r)
            if (!regime_seen[r])
                throw ConfigError(std::string("no style preset covers the ") +
                                  paramgen::regime_name(static_cast<paramgen::HeightRegime>(r)) +
                                  " regime");
        if (tile_count < 0)
            throw ConfigError("tile count must be nonnegative");
        if (workers < 1)
            throw ConfigError("workers must be >= 1");
    }

    const paramgen::StylePreset& style_by_name(const std::string& name) const {
        for (const auto& s : styles)
            if (s.name == name)
                return s;
        throw ConfigError("unknown style: " + name);
    }

    std::vector<const paramgen::StylePreset*> styles_of(paramgen::HeightRegime regime) const {
        std::vector<const paramgen::StylePreset*> out;
        for (const auto& s : styles)
            if (s.regime == regime)
                out.push_back(&s);
        return out;
    }

    /// Content-relevant configuration as canonical JSON (sorted keys); the
    /// manifest stores its hash to detect config drift on restarts.
    json content_json() const {
        json j;
        j["sensor"] = {{"azimuth", {sensor.azimuth.lo, sensor.azimuth.hi}},
                       {"look_mean", sensor.look_mean},
                       {"look_std", sensor.look_std},
                       {"look_clip", {sensor.look_clip.lo, sensor.look_clip.hi}},
                       {"gsd_mean", sensor.gsd_mean},
                       {"gsd_std", sensor.gsd_std},
                       {"gsd_clip", {sensor.gsd_clip.lo, sensor.gsd_clip.hi}},
                       {"image_size", sensor.image_size}};
        j["sun"] = {{"elevation", {sun.elevation.lo, sun.elevation.hi}},
                    {"intensity", {sun.intensity.lo, sun.intensity.hi}},
                    {"color", {sun.color.lo, sun.color.hi}}};
        j["filter"] = {{"height_threshold", filter_params.height_threshold},
                       {"min_coverage", filter_params.min_coverage},
                       {"steepness", filter_params.steepness}};
        j["seed"] = seed;
        json styles_json = json::object();
        for (const auto& s : styles) {
            styles_json[s.name] = {
                {"regime", paramgen::regime_name(s.regime)},
                {"palette", s.palette},
                {"building_height", {s.building_height.lo, s.building_height.hi}},
                {"building_side", {s.building_side.lo, s.building_side.hi}},
                {"roof_angle", {s.roof_angle.lo, s.roof_angle.hi}},
                {"gable_prob", s.gable_prob},
                {"lshape_prob", s.lshape_prob},
                {"obj_density", {s.obj_density.lo, s.obj_density.hi}},
                {"tree_density", {s.tree_density.lo, s.tree_density.hi}},
                {"lot_fraction", {s.lot_fraction.lo, s.lot_fraction.hi}},
                {"district_num", {s.district_num.lo, s.district_num.hi}},
                {"district_size", {s.district_size.lo, s.district_size.hi}},
                {"flat_area", {s.flat_area.lo, s.flat_area.hi}},
                {"mountain_area", {s.mountain_area.lo, s.mountain_area.hi}},
                {"sea_area", {s.sea_area.lo, s.sea_area.hi}},
                {"river_num", {s.river_num.lo, s.river_num.hi}},
                {"road_num", {s.road_num.lo, s.road_num.hi}},
                {"road_width", {s.road_width.lo, s.road_width.hi}},
                {"tree_branches", {s.tree_branches.lo, s.tree_branches.hi}},
                {"tree_leaves", {s.tree_leaves.lo, s.tree_leaves.hi}},
                {"removal", {s.removal.lo, s.removal.hi}},
            };
        }
        j["styles"] = std::move(styles_json);
        return j;
    }

    std::string content_hash() const {
        const std::string dump = content_json().dump();
        return hash_bytes(dump.data(), dump.size());
    }
};

namespace detail {

using IniTable = std::map<std::string, std::map<std::string, std::string>>;

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline IniTable parse_ini(std::istream& in, const std::string& origin) {
    IniTable table;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            table[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": key outside a section");
        table[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return table;
}

inline double parse_double(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty())
            return d;
    } catch (...) {
    }
    throw ConfigError(where + ": expected a number, got '" + v + "'");
}

inline int parse_int(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (trim(v.substr(pos)).empty())
            return static_cast<int>(d);
    } catch (...) {
    }
    throw ConfigError(where + ": expected an integer, got '" + v + "'");
}

inline paramgen::Range parse_range(const std::string& v, const std::string& where) {
    const auto comma = v.find(',');
    if (comma == std::string::npos)
        throw ConfigError(where + ": expected 'lo, hi'");
    return {parse_double(trim(v.substr(0, comma)), where),
            parse_double(trim(v.substr(comma + 1)), where)};
}

inline paramgen::IntRange parse_int_range(const std::string& v, const std::string& where) {
    const auto comma = v.find(',');
    if (comma == std::string::npos)
        throw ConfigError(where + ": expected 'lo, hi'");
    return {parse_int(trim(v.substr(0, comma)), where),
            parse_int(trim(v.substr(comma + 1)), where)};
}

inline void apply_style_key(paramgen::StylePreset& s, const std::string& key,
                            const std::string& value, const std::string& where) {
    if (key == "regime")
        s.regime = paramgen::regime_from_name(value);
    else if (key == "palette")
        s.palette = parse_int(value, where);
    else if (key == "building_height")
        s.building_height = parse_range(value, where);
    else if (key == "building_side")
        s.building_side = parse_range(value, where);
    else if (key == "roof_angle")
        s.roof_angle = parse_range(value, where);
    else if (key == "gable_prob")
        s.gable_prob = parse_double(value, where);
    else if (key == "lshape_prob")
        s.lshape_prob = parse_double(value, where);
    else if (key == "obj_density")
        s.obj_density = parse_range(value, where);
    else if (key == "tree_density")
        s.tree_density = parse_range(value, where);
    else if (key == "lot_fraction")
        s.lot_fraction = parse_range(value, where);
    else if (key == "district_num")
        s.district_num = parse_int_range(value, where);
    else if (key == "district_size")
        s.district_size = parse_range(value, where);
    else if (key == "flat_area")
        s.flat_area = parse_range(value, where);
    else if (key == "mountain_area")
        s.mountain_area = parse_range(value, where);
    else if (key == "sea_area")
        s.sea_area = parse_range(value, where);
    else if (key == "river_num")
        s.river_num = parse_int_range(value, where);
    else if (key == "road_num")
        s.road_num = parse_int_range(value, where);
    else if (key == "road_width")
        s.road_width = parse_range(value, where);
    else if (key == "tree_branches")
        s.tree_branches = parse_int_range(value, where);
    else if (key == "tree_leaves")
        s.tree_leaves = parse_int_range(value, where);
    else if (key == "removal")
        s.removal = parse_range(value, where);
    else
        throw ConfigError(where + ": unknown style key '" + key + "'");
}

} // namespace detail

/// Applies an INI-style config file over the defaults. Sections: [sensor],
/// [sun], [filter], [output], and [styles.NAME] (overriding a default preset
/// or defining a new one). Unknown sections or keys are errors.
inline JobConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    const detail::IniTable table = detail::parse_ini(in, path);

    JobConfig cfg;
    for (const auto& [section, keys] : table) {
        const std::string where = path + " [" + section + "]";
        if (section == "sensor") {
            for (const auto& [key, value] : keys) {
                if (key == "azimuth")
                    cfg.sensor.azimuth = detail::parse_range(value, where);
                else if (key == "look_angle_mean")
                    cfg.sensor.look_mean = detail::parse_double(value, where);
                else if (key == "look_angle_std")
                    cfg.sensor.look_std = detail::parse_double(value, where);
                else if (key == "look_angle_clip")
                    cfg.sensor.look_clip = detail::parse_range(value, where);
                else if (key == "gsd_mean")
                    cfg.sensor.gsd_mean = detail::parse_double(value, where);
                else if (key == "gsd_std")
                    cfg.sensor.gsd_std = detail::parse_double(value, where);
                else if (key == "gsd_clip")
                    cfg.sensor.gsd_clip = detail::parse_range(value, where);
                else if (key == "image_size")
                    cfg.sensor.image_size = detail::parse_int(value, where);
                else
                    throw ConfigError(where + ": unknown key '" + key + "'");
            }
        } else if (section == "sun") {
            for (const auto& [key, value] : keys) {
                if (key == "elevation")
                    cfg.sun.elevation = detail::parse_range(value, where);
                else if (key == "intensity")
                    cfg.sun.intensity = detail::parse_range(value, where);
                else if (key == "color")
                    cfg.sun.color = detail::parse_range(value, where);
                else
                    throw ConfigError(where + ": unknown key '" + key + "'");
            }
        } else if (section == "filter") {
            for (const auto& [key, value] : keys) {
                if (key == "height_threshold")
                    cfg.filter_params.height_threshold = detail::parse_double(value, where);
                else if (key == "min_coverage")
                    cfg.filter_params.min_coverage = detail::parse_double(value, where);
                else if (key == "steepness")
                    cfg.filter_params.steepness = detail::parse_double(value, where);
                else
                    throw ConfigError(where + ": unknown key '" + key + "'");
            }
        } else if (section == "output") {
            for (const auto& [key, value] : keys) {
                if (key == "root")
                    cfg.output_root = value;
                else if (key == "workers")
                    cfg.workers = detail::parse_int(value, where);
                else
                    throw ConfigError(where + ": unknown key '" + key + "'");
            }
        } else if (section.rfind("styles.", 0) == 0) {
            const std::string name = section.substr(7);
            if (name.empty())
                throw ConfigError(where + ": style section needs a name");
            paramgen::StylePreset* target = nullptr;
            for (auto& s : cfg.styles)
                if (s.name == name)
                    target = &s;
            if (!target) {
                paramgen::StylePreset fresh;
                fresh.name = name;
                cfg.styles.push_back(fresh);
                target = &cfg.styles.back();
            }
            for (const auto& [key, value] : keys)
                detail::apply_style_key(*target, key, value, where);
        } else {
            throw ConfigError(path + ": unknown section [" + section + "]");
        }
    }
    cfg.validate();
    return cfg;
}

} // namespace geosynth::pipeline
