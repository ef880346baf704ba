#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"
#include "geosynth/core/rng.hpp"

namespace geosynth::adapt {

/// ClassMix paste mask: pixels of ceil(|present classes| / 2) randomly
/// chosen donor classes.
inline MaskRaster classmix_mask(const LabelRaster& donor_labels, Rng& rng) {
    MaskRaster mask(donor_labels.width(), donor_labels.height(), 0);
    std::array<bool, 256> present{};
    for (std::uint8_t v : donor_labels.pixels())
        present[v] = true;
    std::vector<std::uint8_t> classes;
    for (int c = 0; c < 256; ++c)
        if (present[static_cast<std::size_t>(c)])
            classes.push_back(static_cast<std::uint8_t>(c));
    if (classes.empty())
        return mask;
    const std::size_t pick = (classes.size() + 1) / 2;
    for (std::size_t i = 0; i < pick; ++i) {
        const auto j = static_cast<std::size_t>(
            rng.randint(static_cast<std::int64_t>(i), static_cast<std::int64_t>(classes.size()) - 1));
        std::swap(classes[i], classes[j]);
    }
    std::array<bool, 256> chosen{};
    for (std::size_t i = 0; i < pick; ++i)
        chosen[classes[i]] = true;
    for (std::size_t i = 0; i < donor_labels.size(); ++i)
        mask[i] = chosen[donor_labels[i]] ? 1 : 0;
    return mask;
}

namespace detail {

// documented jitter constants (probabilities 0.8 / 0.5 are fixed; factor
// supports below are this artifact's choice)
inline constexpr double kJitterProb = 0.8;
inline constexpr double kBlurProb = 0.5;
inline constexpr double kFactorLo = 0.75, kFactorHi = 1.25;
inline constexpr double kHueLo = -0.05, kHueHi = 0.05;
inline constexpr double kSigmaLo = 0.5, kSigmaHi = 1.5;

inline void color_jitter(ImageRgb& img, double brightness, double contrast, double saturation,
                         double hue_shift) {
    for (Rgb8& p : img.pixels()) {
        double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
        r *= brightness;
        g *= brightness;
        b *= brightness;
        const double mean = (r + g + b) / 3.0;
        r = mean + (r - mean) * contrast * saturation;
        g = mean + (g - mean) * contrast * saturation;
        b = mean + (b - mean) * contrast * saturation;
        // cheap hue rotation: mix channels toward their neighbors
        const double r2 = r + hue_shift * (g - b);
        const double g2 = g + hue_shift * (b - r);
        const double b2 = b + hue_shift * (r - g);
        p.r = static_cast<std::uint8_t>(std::clamp(r2, 0.0, 1.0) * 255.0 + 0.5);
        p.g = static_cast<std::uint8_t>(std::clamp(g2, 0.0, 1.0) * 255.0 + 0.5);
        p.b = static_cast<std::uint8_t>(std::clamp(b2, 0.0, 1.0) * 255.0 + 0.5);
    }
}

inline void gaussian_blur(ImageRgb& img, double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(2.5 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double norm = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * (k / sigma) * (k / sigma));
        kernel[static_cast<std::size_t>(k + radius)] = w;
        norm += w;
    }
    for (double& w : kernel)
        w /= norm;

    const int w = img.width(), h = img.height();
    ImageRgb tmp(w, h);
    auto pass = [&](const ImageRgb& in, ImageRgb& out, bool horizontal) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc[3] = {0, 0, 0};
                for (int k = -radius; k <= radius; ++k) {
                    const int sx = horizontal ? std::clamp(x + k, 0, w - 1) : x;
                    const int sy = horizontal ? y : std::clamp(y + k, 0, h - 1);
                    const Rgb8 p = in.at(sx, sy);
                    const double wk = kernel[static_cast<std::size_t>(k + radius)];
                    acc[0] += wk * p.r;
                    acc[1] += wk * p.g;
                    acc[2] += wk * p.b;
                }
                out.at(x, y) = {static_cast<std::uint8_t>(std::clamp(acc[0], 0.0, 255.0) + 0.5),
                                static_cast<std::uint8_t>(std::clamp(acc[1], 0.0, 255.0) + 0.5),
                                static_cast<std::uint8_t>(std::clamp(acc[2], 0.0, 255.0) + 0.5)};
            }
        }
    };
    pass(img, tmp, true);
    pass(tmp, img, false);
}

} // namespace detail

struct Augmented {
    ImageRgb image;
    LabelRaster labels;
    MaskRaster pasted; // ClassMix paste mask, for inspection
};

/// Strong augmentation: ClassMix paste from the donor, then color jitter
/// (p=0.8) and Gaussian blur (p=0.5). Labels change only inside the pasted
/// region; all draws come from the seed, and every factor is drawn whether
/// or not it is applied, so outcomes never shift draw alignment.
inline Augmented strong_augment(const ImageRgb& img, const LabelRaster& labels,
                                const ImageRgb& donor_img, const LabelRaster& donor_labels,
                                std::uint64_t seed) {
    require_same_shape(img, labels, "strong_augment");
    require_same_shape(donor_img, donor_labels, "strong_augment donor");

    Augmented out;
    out.image = img;
    out.labels = labels;

    const SeededRng root(seed);
    Rng mix_rng = root.stream("classmix");
    if (!donor_labels.empty() && donor_labels.same_shape(labels)) {
        out.pasted = classmix_mask(donor_labels, mix_rng);
        for (std::size_t i = 0; i < out.pasted.size(); ++i) {
            if (out.pasted[i]) {
                out.image[i] = donor_img[i];
                out.labels[i] = donor_labels[i];
            }
        }
    } else {
        out.pasted = MaskRaster(img.width(), img.height(), 0);
    }

    Rng photo_rng = root.stream("photometric");
    const bool do_jitter = photo_rng.bernoulli(detail::kJitterProb);
    const double brightness = photo_rng.uniform(detail::kFactorLo, detail::kFactorHi);
    const double contrast = photo_rng.uniform(detail::kFactorLo, detail::kFactorHi);
    const double saturation = photo_rng.uniform(detail::kFactorLo, detail::kFactorHi);
    const double hue = photo_rng.uniform(detail::kHueLo, detail::kHueHi);
    const bool do_blur = photo_rng.bernoulli(detail::kBlurProb);
    const double sigma = photo_rng.uniform(detail::kSigmaLo, detail::kSigmaHi);

    if (do_jitter)
        detail::color_jitter(out.image, brightness, contrast, saturation, hue);
    if (do_blur)
        detail::gaussian_blur(out.image, sigma);
    return out;
}

} // namespace geosynth::adapt
