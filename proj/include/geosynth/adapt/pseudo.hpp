#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"
#include "geosynth/render/palette.hpp"

namespace geosynth::adapt {

inline constexpr double kDefaultTau = 0.95;
inline constexpr double kDefaultEta = 1.55;
inline constexpr double kConsistencyEps = 0.01; // meters

struct PseudoLabelBundle {
    LabelRaster labels;         // argmax class ids
    MaskRaster confidence;      // C_LC, 0/1
    HeightRaster refined_height; // ground-zeroed height pseudo-labels
    MaskRaster consistency;     // C_H, 0/1
};

/// Per-pixel argmax labels plus the confidence mask C_LC = 1 where the max
/// class probability strictly exceeds tau. Argmax ties resolve to the
/// lowest class id.
inline std::pair<LabelRaster, MaskRaster> land_cover_confidence(const ProbabilityMap& probs,
                                                                double tau = kDefaultTau) {
    if (probs.empty())
        throw EmptyRaster("land_cover_confidence: empty probability map");
    LabelRaster labels(probs.width(), probs.height(), 0);
    MaskRaster mask(probs.width(), probs.height(), 0);
    for (int y = 0; y < probs.height(); ++y) {
        for (int x = 0; x < probs.width(); ++x) {
            int best = 0;
            float best_p = probs.at(x, y, 0);
            for (int c = 1; c < probs.channels(); ++c) {
                const float p = probs.at(x, y, c);
                if (p > best_p) {
                    best_p = p;
                    best = c;
                }
            }
            labels.at(x, y) = static_cast<std::uint8_t>(best);
            mask.at(x, y) = static_cast<double>(best_p) > tau ? 1 : 0;
        }
    }
    return {std::move(labels), std::move(mask)};
}

inline bool is_ground_class(std::uint8_t label) {
    return !render::has_height(static_cast<render::LandCover>(label));
}

/// Ground-guided refinement: heights are zeroed wherever the pseudo-label is
/// a ground class (anything but Tree/Building). Idempotent.
inline HeightRaster refine_height_pseudo(const HeightRaster& height, const LabelRaster& labels) {
    require_same_shape(height, labels, "refine_height_pseudo");
    HeightRaster out = height;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (is_ground_class(labels[i]))
            out[i] = 0.0f;
    return out;
}

/// Consistency mask C_H = 1 where max(ori/aug, aug/ori) <= eta, with both
/// heights clamped below at eps so zero-height pixels compare as stable.
inline MaskRaster height_consistency(const HeightRaster& h_ori, const HeightRaster& h_aug,
                                     double eta = kDefaultEta, double eps = kConsistencyEps) {
    if (eta <= 1.0)
        throw ConfigError("height_consistency: eta must exceed 1");
    if (eps <= 0.0)
        throw ConfigError("height_consistency: eps must be positive");
    require_same_shape(h_ori, h_aug, "height_consistency");
    MaskRaster out(h_ori.width(), h_ori.height(), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = std::max(static_cast<double>(h_ori[i]), eps);
        const double b = std::max(static_cast<double>(h_aug[i]), eps);
        out[i] = std::max(a / b, b / a) <= eta ? 1 : 0;
    }
    return out;
}

/// Full pseudo-label pass: confidence-gated labels, ground-zeroed heights,
/// and the perturbation-consistency mask.
inline PseudoLabelBundle make_pseudo_labels(const ProbabilityMap& probs,
                                            const HeightRaster& height_ori,
                                            const HeightRaster& height_aug,
                                            double tau = kDefaultTau, double eta = kDefaultEta) {
    PseudoLabelBundle bundle;
    auto [labels, conf] = land_cover_confidence(probs, tau);
    bundle.labels = std::move(labels);
    bundle.confidence = std::move(conf);
    bundle.refined_height = refine_height_pseudo(height_ori, bundle.labels);
    bundle.consistency = height_consistency(height_ori, height_aug, eta);
    return bundle;
}

} // namespace geosynth::adapt
