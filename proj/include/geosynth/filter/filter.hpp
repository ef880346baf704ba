#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"
#include "geosynth/core/rng.hpp"

namespace geosynth::filter {

/// Height-coverage outlier filter parameters. Defaults: the 3 m threshold
/// matches the whole/high evaluation split; H_m and H_s are chosen so
/// all-ground tiles are rarely kept. All config-overridable.
struct FilterParams {
    double height_threshold = 3.0; // H_T, meters
    double min_coverage = 0.05;    // H_m, fraction
    double steepness = 40.0;       // H_s

    void validate() const {
        if (height_threshold <= 0.0)
            throw ConfigError("filter: height threshold must be positive");
        if (min_coverage <= 0.0 || min_coverage >= 1.0)
            throw ConfigError("filter: min coverage must lie in (0,1)");
        if (steepness <= 0.0)
            throw ConfigError("filter: steepness must be positive");
    }
};

/// P_c: fraction of pixels strictly above the height threshold.
inline double coverage_fraction(const HeightRaster& ndsm, double height_threshold) {
    if (ndsm.empty())
        throw EmptyRaster("coverage_fraction: empty raster");
    std::size_t above = 0;
    for (float v : ndsm.pixels())
        if (v > height_threshold)
            ++above;
    return static_cast<double>(above) / static_cast<double>(ndsm.size());
}

/// Sigmoid acceptance probability 1 / (1 + exp(-H_s * (P_c - H_m))).
inline double accept_probability(double coverage, const FilterParams& params) {
    return 1.0 / (1.0 + std::exp(-params.steepness * (coverage - params.min_coverage)));
}

struct TileDecision {
    std::string tile_id;
    double coverage = 0.0;    // P_c
    double probability = 1.0; // Pr (1 when kept deterministically)
    bool kept = false;
    std::string error; // nonempty when the tile could not be read
};

/// Keeps the tile outright when coverage reaches H_m; otherwise keeps it
/// with the sigmoid probability.
inline TileDecision filter_tile(const HeightRaster& ndsm, const FilterParams& params, Rng& rng) {
    params.validate();
    TileDecision d;
    d.coverage = coverage_fraction(ndsm, params.height_threshold);
    if (d.coverage >= params.min_coverage) {
        d.probability = 1.0;
        d.kept = true;
    } else {
        d.probability = accept_probability(d.coverage, params);
        d.kept = rng.uniform01() < d.probability;
    }
    return d;
}

inline TileDecision filter_tile(const HeightRaster& ndsm, const FilterParams& params,
                                const SeededRng& seeds, const std::string& tile_id) {
    Rng rng = seeds.derive("filter").stream(tile_id);
    TileDecision d = filter_tile(ndsm, params, rng);
    d.tile_id = tile_id;
    return d;
}

struct FilterReport {
    std::vector<TileDecision> decisions; // input order
    std::vector<std::string> kept;       // tile ids, input order preserved
    std::size_t failures = 0;
};

/// Order-preserving dataset pass. Each tile draws from its own substream of
/// (seed, tile_id), so decisions are independent of evaluation order. Tiles
/// whose loader throws are recorded and skipped; the run continues.
template <typename LoadFn>
inline FilterReport filter_dataset(const std::vector<std::string>& tile_ids, LoadFn&& load,
                                   const FilterParams& params, std::uint64_t seed) {
    params.validate();
    const SeededRng seeds(seed);
    FilterReport report;
    report.decisions.reserve(tile_ids.size());
    for (const std::string& id : tile_ids) {
        TileDecision d;
        d.tile_id = id;
        try {
            const HeightRaster ndsm = load(id);
            d = filter_tile(ndsm, params, seeds, id);
        } catch (const Error& e) {
            d.error = e.what();
            d.kept = false;
            ++report.failures;
        }
        if (d.kept)
            report.kept.push_back(id);
        report.decisions.push_back(std::move(d));
    }
    return report;
}

} // namespace geosynth::filter
