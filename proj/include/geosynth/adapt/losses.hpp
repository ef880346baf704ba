#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"

namespace geosynth::adapt {

/// Loss hyperparameters: tau = 0.95, eta = 1.55, epsilon = 0.8, lambdas = 1.
struct LossWeights {
    double lambda_target = 1.0;
    double lambda_feat = 1.0;
    double tau = 0.95;
    double eta = 1.55;
    double epsilon = 0.8;

    void validate() const {
        if (lambda_target < 0.0 || lambda_feat < 0.0)
            throw ConfigError("loss weights must be nonnegative");
        if (tau <= 0.0 || tau >= 1.0)
            throw ConfigError("tau must lie in (0,1)");
        if (eta <= 1.0)
            throw ConfigError("eta must exceed 1");
        if (epsilon <= -1.0 || epsilon >= 1.0)
            throw ConfigError("epsilon must lie in (-1,1)");
    }
};

/// Smooth L1 with transition point 1: 0.5 r^2 inside, |r| - 0.5 outside.
inline double smooth_l1(double residual) {
    const double a = std::abs(residual);
    return a < 1.0 ? 0.5 * residual * residual : a - 0.5;
}

inline double smooth_l1_grad(double residual) {
    const double a = std::abs(residual);
    return a < 1.0 ? residual : (residual > 0.0 ? 1.0 : -1.0);
}

namespace detail {

inline double pixel_ce(const ProbabilityMap& probs, int x, int y, std::uint8_t label) {
    const double p = std::max(static_cast<double>(probs.at(x, y, label)), 1e-12);
    return -std::log(p);
}

} // namespace detail

/// Cross-entropy plus smooth-L1, each averaged over all pixels.
inline double supervised_loss(const ProbabilityMap& pred_probs, const HeightRaster& pred_height,
                              const LabelRaster& gt_labels, const HeightRaster& gt_height) {
    require_same_shape(pred_height, gt_height, "supervised_loss heights");
    require_same_shape(gt_labels, gt_height, "supervised_loss labels");
    if (pred_probs.width() != gt_labels.width() || pred_probs.height() != gt_labels.height())
        throw ShapeMismatch("supervised_loss: probability map shape differs");
    double ce = 0.0, sl1 = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < gt_labels.height(); ++y) {
        for (int x = 0; x < gt_labels.width(); ++x) {
            ce += detail::pixel_ce(pred_probs, x, y, gt_labels.at(x, y));
            sl1 += smooth_l1(static_cast<double>(pred_height.at(x, y)) - gt_height.at(x, y));
            ++n;
        }
    }
    return n > 0 ? ce / n + sl1 / n : 0.0;
}

struct MaskedLabels {
    const LabelRaster& labels;
    const MaskRaster& confidence; // C_LC
    const HeightRaster& height;   // refined pseudo heights
    const MaskRaster& consistency; // C_H
};

/// Target-domain loss: per-pixel CE gated by C_LC and smooth-L1 gated by
/// C_H, each averaged over its selected pixels. All-zero masks contribute 0.
inline double adaptation_loss(const ProbabilityMap& pred_probs, const HeightRaster& pred_height,
                              const MaskedLabels& pseudo) {
    require_same_shape(pseudo.labels, pseudo.confidence, "adaptation_loss masks");
    require_same_shape(pseudo.height, pseudo.consistency, "adaptation_loss masks");
    require_same_shape(pred_height, pseudo.height, "adaptation_loss heights");
    if (pred_probs.width() != pseudo.labels.width() ||
        pred_probs.height() != pseudo.labels.height())
        throw ShapeMismatch("adaptation_loss: probability map shape differs");

    double ce = 0.0, sl1 = 0.0;
    std::size_t n_ce = 0, n_h = 0;
    for (int y = 0; y < pseudo.labels.height(); ++y) {
        for (int x = 0; x < pseudo.labels.width(); ++x) {
            if (pseudo.confidence.at(x, y)) {
                ce += detail::pixel_ce(pred_probs, x, y, pseudo.labels.at(x, y));
                ++n_ce;
            }
            if (pseudo.consistency.at(x, y)) {
                sl1 += smooth_l1(static_cast<double>(pred_height.at(x, y)) - pseudo.height.at(x, y));
                ++n_h;
            }
        }
    }
    double loss = 0.0;
    if (n_ce > 0)
        loss += ce / static_cast<double>(n_ce);
    if (n_h > 0)
        loss += sl1 / static_cast<double>(n_h);
    return loss;
}

/// Hinged cosine alignment: 1 - cos when cos < epsilon, else 0.
inline double feature_alignment_loss(std::span<const double> f, std::span<const double> f_ref,
                                     double epsilon) {
    if (f.size() != f_ref.size())
        throw LengthMismatch("feature_alignment_loss: vector lengths differ");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        dot += f[i] * f_ref[i];
        na += f[i] * f[i];
        nb += f_ref[i] * f_ref[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw ZeroVector("feature_alignment_loss: zero-norm vector");
    const double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
    return cosine < epsilon ? 1.0 - cosine : 0.0;
}

/// L_overall = L_source + lambda_target * L_target + lambda_feat * L_feat.
inline double total_loss(double l_source, double l_target, double l_feat,
                         const LossWeights& weights) {
    weights.validate();
    return l_source + weights.lambda_target * l_target + weights.lambda_feat * l_feat;
}

} // namespace geosynth::adapt
