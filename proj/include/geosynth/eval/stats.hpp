#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"
#include "geosynth/render/palette.hpp"

namespace geosynth::eval {

/// Height mean/std over all pixels plus land-cover pixel proportions,
/// aggregated with exact integer counts and 64-bit sums so parallel or
/// per-tile accumulation orders cannot change the result.
struct DatasetStats {
    std::size_t tiles = 0;
    std::size_t failures = 0;
    std::size_t height_pixels = 0;
    double height_mean = 0.0;
    double height_std = 0.0; // population std
    std::array<double, render::kNumClasses> class_proportions{};
    std::size_t label_pixels = 0;
};

class StatsAccumulator {
public:
    void add_height(const HeightRaster& ndsm) {
        for (float v : ndsm.pixels()) {
            sum_ += v;
            sum_sq_ += static_cast<double>(v) * v;
        }
        n_ += ndsm.size();
    }

    void add_labels(const LabelRaster& labels) {
        for (std::uint8_t v : labels.pixels())
            if (v < render::kNumClasses)
                ++class_counts_[v];
        label_n_ += labels.size();
    }

    void count_tile() { ++tiles_; }
    void count_failure() { ++failures_; }

    DatasetStats finish() const {
        DatasetStats s;
        s.tiles = tiles_;
        s.failures = failures_;
        s.height_pixels = n_;
        if (n_ > 0) {
            s.height_mean = sum_ / static_cast<double>(n_);
            const double var = sum_sq_ / static_cast<double>(n_) - s.height_mean * s.height_mean;
            s.height_std = std::sqrt(std::max(0.0, var));
        }
        s.label_pixels = label_n_;
        if (label_n_ > 0) {
            for (int c = 0; c < render::kNumClasses; ++c)
                s.class_proportions[static_cast<std::size_t>(c)] =
                    static_cast<double>(class_counts_[static_cast<std::size_t>(c)]) /
                    static_cast<double>(label_n_);
        }
        return s;
    }

private:
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
    std::size_t n_ = 0;
    std::array<std::uint64_t, render::kNumClasses> class_counts_{};
    std::size_t label_n_ = 0;
    std::size_t tiles_ = 0;
    std::size_t failures_ = 0;
};

/// Per-style breakdown alongside the global aggregate.
struct DatasetStatsBundle {
    DatasetStats total;
    std::map<std::string, DatasetStats> per_style;
};

} // namespace geosynth::eval
