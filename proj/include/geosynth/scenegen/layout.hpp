#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "geosynth/core/error.hpp"
#include "geosynth/core/geometry.hpp"
#include "geosynth/core/raster.hpp"
#include "geosynth/core/rng.hpp"
#include "geosynth/paramgen/plan.hpp"
#include "geosynth/scenegen/heightfield.hpp"

namespace geosynth::scenegen {

/// Ground zoning. Every cell carries exactly one zone; Lot cells are the
/// only places buildings may stand.
enum class Zone : std::uint8_t {
    Bareland = 0,
    Rangeland = 1,
    Developed = 2,
    Road = 3,
    Water = 4,
    Agriculture = 5,
    Forest = 6,
    Lot = 7,
};

class ParcelMap {
public:
    ParcelMap() = default;
    ParcelMap(int resolution, double cell_size)
        : res_(resolution), cell_(cell_size),
          zone_(resolution, resolution, static_cast<std::uint8_t>(Zone::Rangeland)),
          district_(resolution, resolution, std::int16_t{-1}) {}

    int resolution() const { return res_; }
    double cell_size() const { return cell_; }

    Zone zone(int i, int j) const { return static_cast<Zone>(zone_.at(i, j)); }
    void set_zone(int i, int j, Zone z) { zone_.at(i, j) = static_cast<std::uint8_t>(z); }

    std::int16_t district(int i, int j) const { return district_.at(i, j); }
    void set_district(int i, int j, std::int16_t d) { district_.at(i, j) = d; }

    Zone zone_at(double x, double y) const { return zone(clamp_index(x), clamp_index(y)); }
    std::int16_t district_at(double x, double y) const {
        return district(clamp_index(x), clamp_index(y));
    }

    int district_count() const { return district_count_; }
    void set_district_count(int n) { district_count_ = n; }

    const std::vector<Polyline>& roads() const { return roads_; }
    const std::vector<Polyline>& rivers() const { return rivers_; }
    std::vector<Polyline>& roads() { return roads_; }
    std::vector<Polyline>& rivers() { return rivers_; }
    double network_width() const { return network_width_; }
    void set_network_width(double w) { network_width_ = w; }

    /// Per-zone cell fractions, brute-force countable.
    std::array<double, 8> zone_fractions() const {
        std::array<double, 8> f{};
        for (std::uint8_t v : zone_.pixels())
            f[v] += 1.0;
        for (double& v : f)
            v /= static_cast<double>(zone_.size());
        return f;
    }

    int clamp_index(double coord) const {
        return std::clamp(static_cast<int>(coord / cell_), 0, res_ - 1);
    }

private:
    int res_ = 0;
    double cell_ = 1.0;
    Raster<std::uint8_t> zone_;
    Raster<std::int16_t> district_;
    std::vector<Polyline> roads_;
    std::vector<Polyline> rivers_;
    double network_width_ = 6.0;
    int district_count_ = 0;
};

namespace detail {

inline void paint_polyline(ParcelMap& parcels, const Heightfield& terrain, const Polyline& line,
                           double half_width, Zone zone, bool skip_sea) {
    const double cell = parcels.cell_size();
    const int res = parcels.resolution();
    for (std::size_t s = 0; s + 1 < line.size(); ++s) {
        const Vec2 a = line[s];
        const Vec2 b = line[s + 1];
        const Vec2 ab = b - a;
        const double len2 = dot(ab, ab);
        const int i0 = std::clamp(static_cast<int>((std::min(a.x, b.x) - half_width) / cell), 0, res - 1);
        const int i1 = std::clamp(static_cast<int>((std::max(a.x, b.x) + half_width) / cell), 0, res - 1);
        const int j0 = std::clamp(static_cast<int>((std::min(a.y, b.y) - half_width) / cell), 0, res - 1);
        const int j1 = std::clamp(static_cast<int>((std::max(a.y, b.y) + half_width) / cell), 0, res - 1);
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                const Vec2 p{(i + 0.5) * cell, (j + 0.5) * cell};
                double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                const Vec2 nearest = a + ab * t;
                if (length(p - nearest) <= half_width) {
                    if (skip_sea && terrain.region(i, j) == TerrainRegion::Sea)
                        continue;
                    parcels.set_zone(i, j, zone);
                }
            }
        }
    }
}

/// Greedy downhill walk from a start cell; stops at sea, the border, or a
/// local minimum. Vertex elevations are non-increasing by construction.
inline Polyline trace_river(const Heightfield& terrain, int si, int sj, Rng& rng) {
    const int res = terrain.resolution();
    const double cell = terrain.cell_size();
    Polyline line;
    int ci = si, cj = sj;
    double cz = terrain.at(ci, cj);
    line.push_back({(ci + 0.5) * cell, (cj + 0.5) * cell});
    Raster<std::uint8_t> visited(res, res, 0);
    visited.at(ci, cj) = 1;
    const int max_steps = 4 * res;
    for (int step = 0; step < max_steps; ++step) {
        if (terrain.region(ci, cj) == TerrainRegion::Sea)
            break;
        int best_i = -1, best_j = -1;
        double best_z = cz;
        double best_key = 0.0;
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0)
                    continue;
                const int ni = ci + di, nj = cj + dj;
                if (ni < 0 || nj < 0 || ni >= res || nj >= res)
                    continue;
                if (visited.at(ni, nj))
                    continue;
                const double nz = terrain.at(ni, nj);
                if (nz > cz)
                    continue;
                // prefer the steepest descent, with a dash of jitter so
                // parallel rivers do not collapse onto one path
                const double key = (cz - nz) + 0.05 * rng.uniform01();
                if (best_i < 0 || key > best_key) {
                    best_i = ni;
                    best_j = nj;
                    best_z = nz;
                    best_key = key;
                }
            }
        }
        if (best_i < 0)
            break;
        ci = best_i;
        cj = best_j;
        cz = best_z;
        visited.at(ci, cj) = 1;
        line.push_back({(ci + 0.5) * cell, (cj + 0.5) * cell});
        if (ci == 0 || cj == 0 || ci == res - 1 || cj == res - 1)
            break;
    }
    return line;
}

} // namespace detail

/// Zones the tile: water and mountain cover from the terrain, exactly
/// plan.district_num districts grown over flat land, then rivers and roads
/// buffered over the grid. Throws LayoutInfeasible when the flat area cannot
/// host the requested districts.
inline ParcelMap generate_layout(const paramgen::ScenePlan& plan, const Heightfield& terrain) {
    const int res = terrain.resolution();
    ParcelMap parcels(res, terrain.cell_size());
    parcels.set_network_width(plan.network.width);

    const SeededRng root = SeededRng(plan.seed).derive("layout");
    const std::uint64_t veg_seed = root.stream_seed("vegetation");

    // base cover from terrain regions
    std::vector<std::pair<int, int>> flat_cells;
    flat_cells.reserve(static_cast<std::size_t>(res) * res);
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            switch (terrain.region(i, j)) {
            case TerrainRegion::Sea:
                parcels.set_zone(i, j, Zone::Water);
                break;
            case TerrainRegion::Mountain:
                parcels.set_zone(i, j, noise::fbm2(veg_seed, 12.0 * i / res, 12.0 * j / res, 4) > 0.45
                                           ? Zone::Forest
                                           : Zone::Rangeland);
                break;
            case TerrainRegion::Flat:
                flat_cells.emplace_back(i, j);
                break;
            }
        }
    }

    const int district_num = plan.grid.district_num;
    constexpr int kMinCellsPerDistrict = 9;
    if (district_num > 0 &&
        flat_cells.size() < static_cast<std::size_t>(district_num) * kMinCellsPerDistrict)
        throw LayoutInfeasible("flat area too small for " + std::to_string(district_num) +
                               " districts");

    // district seeds: dart throwing with a relaxing spacing preference
    Rng seed_rng = root.stream("district_seeds");
    std::vector<std::pair<int, int>> seeds;
    double spacing = plan.grid.district_size / parcels.cell_size();
    while (static_cast<int>(seeds.size()) < district_num) {
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            const auto& cand = flat_cells[static_cast<std::size_t>(
                seed_rng.randint(0, static_cast<std::int64_t>(flat_cells.size()) - 1))];
            bool ok = true;
            for (const auto& s : seeds) {
                const double dx = s.first - cand.first;
                const double dy = s.second - cand.second;
                if (dx * dx + dy * dy < spacing * spacing) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                seeds.push_back(cand);
                placed = true;
            }
        }
        if (!placed)
            spacing *= 0.7; // relax and retry
    }

    // multi-source BFS over flat cells: regions are connected by construction
    std::deque<std::tuple<int, int, std::int16_t>> queue;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        parcels.set_district(seeds[k].first, seeds[k].second, static_cast<std::int16_t>(k));
        queue.emplace_back(seeds[k].first, seeds[k].second, static_cast<std::int16_t>(k));
    }
    while (!queue.empty()) {
        auto [i, j, d] = queue.front();
        queue.pop_front();
        constexpr int di[4] = {1, -1, 0, 0};
        constexpr int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int ni = i + di[k], nj = j + dj[k];
            if (ni < 0 || nj < 0 || ni >= res || nj >= res)
                continue;
            if (terrain.region(ni, nj) != TerrainRegion::Flat)
                continue;
            if (parcels.district(ni, nj) >= 0)
                continue;
            parcels.set_district(ni, nj, d);
            queue.emplace_back(ni, nj, d);
        }
    }
    parcels.set_district_count(district_num);

    // zone each district
    Rng type_rng = root.stream("district_types");
    std::vector<Zone> district_zone(static_cast<std::size_t>(district_num), Zone::Rangeland);
    for (auto& z : district_zone) {
        const double rest = 1.0 - plan.grid.lot_fraction;
        const double w[6] = {plan.grid.lot_fraction, rest * 0.20, rest * 0.25,
                             rest * 0.20,            rest * 0.20, rest * 0.15};
        static constexpr Zone kZones[6] = {Zone::Lot,       Zone::Developed, Zone::Agriculture,
                                           Zone::Rangeland, Zone::Forest,    Zone::Bareland};
        z = kZones[type_rng.categorical(std::span<const double>(w, 6))];
    }
    for (const auto& [i, j] : flat_cells) {
        const std::int16_t d = parcels.district(i, j);
        parcels.set_zone(i, j, d >= 0 ? district_zone[static_cast<std::size_t>(d)]
                                      : Zone::Rangeland);
    }

    // rivers: start high, walk downhill
    Rng river_rng = root.stream("rivers");
    if (plan.network.river_num > 0) {
        std::vector<std::pair<int, int>> land;
        for (int j = 0; j < res; ++j)
            for (int i = 0; i < res; ++i)
                if (terrain.region(i, j) != TerrainRegion::Sea)
                    land.emplace_back(i, j);
        std::sort(land.begin(), land.end(), [&](auto a, auto b) {
            const float za = terrain.at(a.first, a.second);
            const float zb = terrain.at(b.first, b.second);
            return za != zb ? za > zb : a < b;
        });
        const std::size_t top = std::max<std::size_t>(1, land.size() / 5);
        for (int r = 0; r < plan.network.river_num; ++r) {
            const auto& start =
                land[static_cast<std::size_t>(river_rng.randint(0, static_cast<std::int64_t>(top) - 1))];
            Polyline line = detail::trace_river(terrain, start.first, start.second, river_rng);
            detail::paint_polyline(parcels, terrain, line, 0.5 * plan.network.width, Zone::Water,
                                   /*skip_sea=*/false);
            parcels.rivers().push_back(std::move(line));
        }
    }

    // roads: straight border-to-border lines with jittered bearings; they
    // bridge rivers but stop at the sea
    Rng road_rng = root.stream("roads");
    const double extent = res * parcels.cell_size();
    for (int r = 0; r < plan.network.road_num; ++r) {
        const double angle = road_rng.uniform(0.0, std::numbers::pi);
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        const Vec2 through{road_rng.uniform(0.15, 0.85) * extent,
                           road_rng.uniform(0.15, 0.85) * extent};
        const double diag = 1.5 * extent;
        Polyline line{through - dir * diag, through + dir * diag};
        detail::paint_polyline(parcels, terrain, line, 0.5 * plan.network.width, Zone::Road,
                               /*skip_sea=*/true);
        parcels.roads().push_back(std::move(line));
    }

    return parcels;
}

} // namespace geosynth::scenegen
