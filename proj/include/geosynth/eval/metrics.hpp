#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"
#include "geosynth/render/palette.hpp"

namespace geosynth::eval {

inline constexpr double kHighRegionThreshold = 3.0; // meters, gt-defined
inline constexpr double kF1HeightThreshold = 1.0;   // T, meters
inline constexpr double kRatioEps = 0.01;           // meters, zero-height clamp
inline const std::array<double, 3> kEtaLevels = {1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25};

enum class Region { Whole, High };

struct HeightErrors {
    double mae = 0.0;
    double rmse = 0.0;
    std::size_t pixels = 0;
};

/// MAE/RMSE over the region's pixels. The high region is defined on ground
/// truth (> 3 m); when it is empty the result is absent rather than zero.
inline std::optional<HeightErrors> height_errors(const HeightRaster& pred, const HeightRaster& gt,
                                                 Region region) {
    require_same_shape(pred, gt, "height_errors");
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (region == Region::High && !(gt[i] > kHighRegionThreshold))
            continue;
        const double d = static_cast<double>(pred[i]) - static_cast<double>(gt[i]);
        abs_sum += std::abs(d);
        sq_sum += d * d;
        ++n;
    }
    if (n == 0)
        return std::nullopt;
    return HeightErrors{abs_sum / n, std::sqrt(sq_sum / n), n};
}

/// maxRatio map: delta = max(pred/gt, gt/pred) with both operands clamped
/// below at eps, so 0-vs-0 reads as a correct prediction (delta = 1).
inline Raster<double> max_ratio_map(const HeightRaster& pred, const HeightRaster& gt,
                                    double eps = kRatioEps) {
    require_same_shape(pred, gt, "max_ratio_map");
    Raster<double> delta(pred.width(), pred.height(), 1.0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = std::max(static_cast<double>(pred[i]), eps);
        const double g = std::max(static_cast<double>(gt[i]), eps);
        delta[i] = std::max(p / g, g / p);
    }
    return delta;
}

/// Fraction of pixels with delta < eta.
inline double delta_accuracy(const Raster<double>& delta, double eta) {
    if (delta.empty())
        throw EmptyRaster("delta_accuracy: empty raster");
    std::size_t ok = 0;
    for (double d : delta.pixels())
        if (d < eta)
            ++ok;
    return static_cast<double>(ok) / static_cast<double>(delta.size());
}

/// F1 over significant heights: TP needs both sides above T and delta < eta;
/// FP/FN are one-sided threshold misses. Returns nullopt (skip marker) when
/// the ground truth has no pixel above T.
inline std::optional<double> f1_he(const HeightRaster& pred, const HeightRaster& gt, double eta,
                                   double threshold = kF1HeightThreshold, double eps = kRatioEps) {
    require_same_shape(pred, gt, "f1_he");
    std::size_t tp = 0, fp = 0, fn = 0, gt_above = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const double p = static_cast<double>(pred[i]);
        const double g = static_cast<double>(gt[i]);
        if (g > threshold)
            ++gt_above;
        const bool p_hi = p > threshold;
        const bool g_hi = g > threshold;
        if (p_hi && g_hi) {
            const double pc = std::max(p, eps);
            const double gc = std::max(g, eps);
            if (std::max(pc / gc, gc / pc) < eta)
                ++tp;
        } else if (p_hi && !g_hi) {
            ++fp;
        } else if (!p_hi && g_hi) {
            ++fn;
        }
    }
    if (gt_above == 0)
        return std::nullopt;
    const double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    if (precision + recall == 0.0)
        return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

/// Per-image height evaluation across the whole/high split.
struct HeightEvalReport {
    std::optional<HeightErrors> whole;
    std::optional<HeightErrors> high;
    std::array<double, 3> delta_acc_whole{};
    std::array<std::optional<double>, 3> delta_acc_high{};
    std::array<std::optional<double>, 3> f1{};
};

inline HeightEvalReport evaluate_height(const HeightRaster& pred, const HeightRaster& gt) {
    HeightEvalReport r;
    r.whole = height_errors(pred, gt, Region::Whole);
    r.high = height_errors(pred, gt, Region::High);
    const Raster<double> delta = max_ratio_map(pred, gt);
    for (std::size_t k = 0; k < kEtaLevels.size(); ++k) {
        r.delta_acc_whole[k] = delta_accuracy(delta, kEtaLevels[k]);
        r.f1[k] = f1_he(pred, gt, kEtaLevels[k]);
    }
    if (r.high) {
        for (std::size_t k = 0; k < kEtaLevels.size(); ++k) {
            std::size_t ok = 0, n = 0;
            for (std::size_t i = 0; i < gt.size(); ++i) {
                if (!(gt[i] > kHighRegionThreshold))
                    continue;
                ++n;
                if (delta[i] < kEtaLevels[k])
                    ++ok;
            }
            r.delta_acc_high[k] = n > 0 ? static_cast<double>(ok) / n : 0.0;
        }
    }
    return r;
}

// ---- segmentation ----

struct SegEvalReport {
    std::vector<std::int64_t> confusion; // num_classes x num_classes, [gt][pred]
    int num_classes = 0;
    std::vector<std::optional<double>> iou; // absent when class missing from both
    double miou = 0.0;
    int evaluated_classes = 0;

    std::int64_t& at(int gt_class, int pred_class) {
        return confusion[static_cast<std::size_t>(gt_class) * num_classes + pred_class];
    }
    std::int64_t at(int gt_class, int pred_class) const {
        return confusion[static_cast<std::size_t>(gt_class) * num_classes + pred_class];
    }
};

/// IoU per class from confusion counts; classes absent from both prediction
/// and ground truth are excluded from the mean.
inline SegEvalReport seg_iou(const LabelRaster& pred, const LabelRaster& gt,
                             int num_classes = render::kNumClasses) {
    require_same_shape(pred, gt, "seg_iou");
    SegEvalReport r;
    r.num_classes = num_classes;
    r.confusion.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const int g = gt[i];
        const int p = pred[i];
        if (g < num_classes && p < num_classes)
            ++r.at(g, p);
    }
    r.iou.assign(static_cast<std::size_t>(num_classes), std::nullopt);
    double sum = 0.0;
    for (int c = 0; c < num_classes; ++c) {
        std::int64_t gt_total = 0, pred_total = 0;
        for (int k = 0; k < num_classes; ++k) {
            gt_total += r.at(c, k);
            pred_total += r.at(k, c);
        }
        const std::int64_t inter = r.at(c, c);
        const std::int64_t uni = gt_total + pred_total - inter;
        if (uni == 0)
            continue;
        r.iou[static_cast<std::size_t>(c)] = static_cast<double>(inter) / static_cast<double>(uni);
        sum += *r.iou[static_cast<std::size_t>(c)];
        ++r.evaluated_classes;
    }
    r.miou = r.evaluated_classes > 0 ? sum / r.evaluated_classes : 0.0;
    return r;
}

// ---- damage mapping ----

/// Height-difference damage mask: (pre - post) > threshold.
inline MaskRaster damage_map(const HeightRaster& pre_height, const HeightRaster& post_height,
                             double threshold) {
    if (threshold <= 0.0)
        throw ConfigError("damage_map: threshold must be positive");
    require_same_shape(pre_height, post_height, "damage_map");
    MaskRaster out(pre_height.width(), pre_height.height(), 0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (static_cast<double>(pre_height[i]) - static_cast<double>(post_height[i])) >
                         threshold
                     ? 1
                     : 0;
    return out;
}

} // namespace geosynth::eval
