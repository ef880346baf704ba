#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"
#include "geosynth/scenegen/layout.hpp"

namespace geosynth::render {

/// Fixed 8-class land-cover taxonomy.
enum class LandCover : std::uint8_t {
    Bareland = 0,
    Rangeland = 1,
    DevelopedSpace = 2,
    Road = 3,
    Tree = 4,
    Water = 5,
    Agriculture = 6,
    Building = 7,
};

inline constexpr int kNumClasses = 8;

inline const char* class_name(LandCover c) {
    switch (c) {
    case LandCover::Bareland: return "bareland";
    case LandCover::Rangeland: return "rangeland";
    case LandCover::DevelopedSpace: return "developed_space";
    case LandCover::Road: return "road";
    case LandCover::Tree: return "tree";
    case LandCover::Water: return "water";
    case LandCover::Agriculture: return "agriculture";
    case LandCover::Building: return "building";
    }
    return "?";
}

inline LandCover class_from_name(const std::string& s) {
    for (int i = 0; i < kNumClasses; ++i)
        if (s == class_name(static_cast<LandCover>(i)))
            return static_cast<LandCover>(i);
    throw ConfigError("unknown land cover class: " + s);
}

/// Display colors for the label PNG palette.
inline const std::array<Rgb8, kNumClasses>& class_colors() {
    static const std::array<Rgb8, kNumClasses> colors{{
        {128, 96, 64},   // bareland
        {148, 188, 108}, // rangeland
        {180, 180, 180}, // developed space
        {64, 64, 64},    // road
        {32, 128, 48},   // tree
        {40, 88, 168},   // water
        {196, 180, 84},  // agriculture
        {200, 64, 48},   // building
    }};
    return colors;
}

/// Ground zone -> rendered land-cover class. Lot ground reads as developed
/// space; forest understory reads as rangeland (canopy pixels become Tree).
inline LandCover zone_class(scenegen::Zone z) {
    switch (z) {
    case scenegen::Zone::Bareland: return LandCover::Bareland;
    case scenegen::Zone::Rangeland: return LandCover::Rangeland;
    case scenegen::Zone::Developed: return LandCover::DevelopedSpace;
    case scenegen::Zone::Road: return LandCover::Road;
    case scenegen::Zone::Water: return LandCover::Water;
    case scenegen::Zone::Agriculture: return LandCover::Agriculture;
    case scenegen::Zone::Forest: return LandCover::Rangeland;
    case scenegen::Zone::Lot: return LandCover::DevelopedSpace;
    }
    return LandCover::Bareland;
}

inline bool has_height(LandCover c) { return c == LandCover::Tree || c == LandCover::Building; }

} // namespace geosynth::render
