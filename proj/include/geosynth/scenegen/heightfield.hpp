#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "geosynth/core/raster.hpp"
#include "geosynth/core/rng.hpp"
#include "geosynth/paramgen/plan.hpp"

namespace geosynth::scenegen {

inline constexpr double kSeaLevel = 0.0;

// ---- seeded lattice value noise ----

namespace noise {

inline double lattice(std::uint64_t seed, std::int64_t xi, std::int64_t yi) {
    std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(xi) * 0x8da6b343ULL) ^
                                 (static_cast<std::uint64_t>(yi) * 0xd8163841ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double smooth5(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

/// Bilinear value noise with quintic fade, range [0,1].
inline double value2(std::uint64_t seed, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto xi = static_cast<std::int64_t>(fx);
    const auto yi = static_cast<std::int64_t>(fy);
    const double tx = smooth5(x - fx);
    const double ty = smooth5(y - fy);
    const double v00 = lattice(seed, xi, yi);
    const double v10 = lattice(seed, xi + 1, yi);
    const double v01 = lattice(seed, xi, yi + 1);
    const double v11 = lattice(seed, xi + 1, yi + 1);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

/// Fractional Brownian motion over value noise, normalized to [0,1].
inline double fbm2(std::uint64_t seed, double x, double y, int octaves = 6,
                   double lacunarity = 2.0, double gain = 0.5) {
    double sum = 0.0;
    double amp = 1.0;
    double norm = 0.0;
    double fx = x, fy = y;
    for (int o = 0; o < octaves; ++o) {
        sum += amp * value2(seed + static_cast<std::uint64_t>(o) * 0x9e3779b9ULL, fx, fy);
        norm += amp;
        amp *= gain;
        fx *= lacunarity;
        fy *= lacunarity;
    }
    return sum / norm;
}

inline double smoothstep(double e0, double e1, double x) {
    if (e1 <= e0)
        return x >= e1 ? 1.0 : 0.0;
    const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

} // namespace noise

enum class TerrainRegion : std::uint8_t { Sea = 0, Flat = 1, Mountain = 2 };

/// Terrain elevation sampled at cell centers; bilinear between centers,
/// clamped at the borders. cell_size = gsd * image_size / resolution.
class Heightfield {
public:
    Heightfield() = default;
    Heightfield(int resolution, double cell_size)
        : res_(resolution), cell_(cell_size), z_(resolution, resolution, 0.0f),
          region_(resolution, resolution, static_cast<std::uint8_t>(TerrainRegion::Flat)) {}

    int resolution() const { return res_; }
    double cell_size() const { return cell_; }
    double extent() const { return res_ * cell_; }

    float& at(int i, int j) { return z_.at(i, j); }
    float at(int i, int j) const { return z_.at(i, j); }

    TerrainRegion region(int i, int j) const { return static_cast<TerrainRegion>(region_.at(i, j)); }
    void set_region(int i, int j, TerrainRegion r) { region_.at(i, j) = static_cast<std::uint8_t>(r); }

    TerrainRegion region_at(double x, double y) const {
        return region(clamp_index(x), clamp_index(y));
    }

    double sample(double x, double y) const {
        const double gx = x / cell_ - 0.5;
        const double gy = y / cell_ - 0.5;
        const int x0 = std::clamp(static_cast<int>(std::floor(gx)), 0, res_ - 1);
        const int y0 = std::clamp(static_cast<int>(std::floor(gy)), 0, res_ - 1);
        const int x1 = std::min(x0 + 1, res_ - 1);
        const int y1 = std::min(y0 + 1, res_ - 1);
        const double tx = std::clamp(gx - x0, 0.0, 1.0);
        const double ty = std::clamp(gy - y0, 0.0, 1.0);
        const double a = z_.at(x0, y0) + (z_.at(x1, y0) - z_.at(x0, y0)) * tx;
        const double b = z_.at(x0, y1) + (z_.at(x1, y1) - z_.at(x0, y1)) * tx;
        return a + (b - a) * ty;
    }

    double min_elevation() const {
        float m = z_[0];
        for (float v : z_.pixels())
            m = std::min(m, v);
        return m;
    }
    double max_elevation() const {
        float m = z_[0];
        for (float v : z_.pixels())
            m = std::max(m, v);
        return m;
    }

    double region_fraction(TerrainRegion r) const {
        std::size_t n = 0;
        for (std::uint8_t v : region_.pixels())
            if (v == static_cast<std::uint8_t>(r))
                ++n;
        return static_cast<double>(n) / region_.size();
    }

    int clamp_index(double coord) const {
        return std::clamp(static_cast<int>(coord / cell_), 0, res_ - 1);
    }

private:
    int res_ = 0;
    double cell_ = 1.0;
    Raster<float> z_;
    Raster<std::uint8_t> region_;
};

inline int terrain_resolution(int image_size) {
    return std::clamp(image_size / 2, 32, 256);
}

/// Builds the tile terrain: a low-frequency selector field splits the tile
/// into sea / flat / mountain regions at the exact requested fractions
/// (quantile thresholds), then fBM detail shapes each region.
/// Sea is constant at kSeaLevel; flat land stays within a 0.4 m band.
inline Heightfield generate_terrain(const paramgen::ScenePlan& plan) {
    const int res = terrain_resolution(plan.sensor.image_size);
    const double extent = plan.sensor.ground_extent();
    Heightfield hf(res, extent / res);

    const SeededRng root = SeededRng(plan.seed).derive("terrain");
    const std::uint64_t sel_seed = root.stream_seed("selector");
    const std::uint64_t flat_seed = root.stream_seed("flat");
    const std::uint64_t mtn_seed = root.stream_seed("mountain");

    const int n = res * res;
    std::vector<double> sel(static_cast<std::size_t>(n));
    for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i)
            sel[static_cast<std::size_t>(j) * res + i] =
                noise::fbm2(sel_seed, 4.0 * i / res, 4.0 * j / res, 4);

    double smin = sel[0], smax = sel[0];
    for (double v : sel) {
        smin = std::min(smin, v);
        smax = std::max(smax, v);
    }
    const double span = std::max(smax - smin, 1e-12);
    for (double& v : sel)
        v = (v - smin) / span;

    // quantile thresholds give exact region fractions
    std::vector<double> sorted = sel;
    std::sort(sorted.begin(), sorted.end());
    const auto quantile_at = [&](double q) -> double {
        const auto k = static_cast<std::size_t>(std::llround(q * n));
        if (k == 0)
            return -1.0; // below every sample
        if (k >= static_cast<std::size_t>(n))
            return 2.0; // above every sample
        return sorted[k];
    };
    const double t_sea = quantile_at(plan.terrain.sea_area);
    const double t_mtn = quantile_at(1.0 - plan.terrain.mountain_area);

    const double mountain_amp = 45.0;
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            const double s = sel[static_cast<std::size_t>(j) * res + i];
            if (s < t_sea) {
                hf.at(i, j) = static_cast<float>(kSeaLevel);
                hf.set_region(i, j, TerrainRegion::Sea);
                continue;
            }
            const double fx = 24.0 * i / res;
            const double fy = 24.0 * j / res;
            const double detail = noise::fbm2(flat_seed, fx, fy, 6);
            const double flat_elev = 1.8 + 0.4 * (detail - 0.5);
            // narrow shore ramp up from the waterline
            const double coast = plan.terrain.sea_area > 0.0
                                     ? noise::smoothstep(t_sea, t_sea + 0.04, s)
                                     : 1.0;
            double elev = 0.3 + (flat_elev - 0.3) * coast;
            if (s >= t_mtn) {
                const double ramp = noise::smoothstep(t_mtn, 1.0, s);
                const double relief = noise::fbm2(mtn_seed, 8.0 * i / res, 8.0 * j / res, 6);
                elev += ramp * mountain_amp * (0.4 + 0.6 * relief);
                hf.set_region(i, j, TerrainRegion::Mountain);
            } else {
                hf.set_region(i, j, TerrainRegion::Flat);
            }
            hf.at(i, j) = static_cast<float>(elev);
        }
    }
    return hf;
}

} // namespace geosynth::scenegen
