#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"

namespace geosynth::adapt {

enum class TranslateMode { HistogramMatch, PixelDistribution };

inline const char* translate_mode_name(TranslateMode m) {
    return m == TranslateMode::HistogramMatch ? "hm" : "pda";
}

namespace detail {

inline std::array<std::array<double, 256>, 3> channel_cdfs(const ImageRgb& img) {
    std::array<std::array<double, 256>, 3> cdf{};
    for (const Rgb8& p : img.pixels()) {
        cdf[0][p.r] += 1.0;
        cdf[1][p.g] += 1.0;
        cdf[2][p.b] += 1.0;
    }
    const double n = static_cast<double>(img.size());
    for (auto& c : cdf) {
        double run = 0.0;
        for (double& v : c) {
            run += v;
            v = run / n;
        }
    }
    return cdf;
}

/// Classic CDF inversion: smallest reference level whose CDF reaches the
/// source level's CDF.
inline std::array<std::array<std::uint8_t, 256>, 3>
match_luts(const std::array<std::array<double, 256>, 3>& src_cdf,
           const std::array<std::array<double, 256>, 3>& ref_cdf) {
    std::array<std::array<std::uint8_t, 256>, 3> lut{};
    for (int c = 0; c < 3; ++c) {
        int j = 0;
        for (int v = 0; v < 256; ++v) {
            while (j < 255 && ref_cdf[c][static_cast<std::size_t>(j)] < src_cdf[c][static_cast<std::size_t>(v)])
                ++j;
            lut[c][static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(j);
        }
    }
    return lut;
}

struct ChannelMoments {
    std::array<double, 3> mean{};
    std::array<double, 3> std{};
};

inline ChannelMoments moments(const ImageRgb& img) {
    ChannelMoments m;
    std::array<double, 3> sum{}, sum_sq{};
    for (const Rgb8& p : img.pixels()) {
        const double v[3] = {static_cast<double>(p.r), static_cast<double>(p.g),
                             static_cast<double>(p.b)};
        for (int c = 0; c < 3; ++c) {
            sum[c] += v[c];
            sum_sq[c] += v[c] * v[c];
        }
    }
    const double n = static_cast<double>(img.size());
    for (int c = 0; c < 3; ++c) {
        m.mean[c] = sum[c] / n;
        m.std[c] = std::sqrt(std::max(0.0, sum_sq[c] / n - m.mean[c] * m.mean[c]));
    }
    return m;
}

inline std::uint8_t blend_u8(double mapped, double src, double blend) {
    const double v = blend * mapped + (1.0 - blend) * src;
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0) + 0.5);
}

} // namespace detail

/// Statistical image translation toward a reference image. HM remaps each
/// channel's CDF onto the reference's; PDA ("standard" transform)
/// standardizes each channel and rescales to the reference moments. The
/// result is blended with the source and clamped to [0,255].
inline ImageRgb translate_image(const ImageRgb& src, const ImageRgb& ref, TranslateMode mode,
                                double blend) {
    if (ref.empty())
        throw EmptyReference("translate_image: empty reference image");
    if (src.empty())
        throw EmptyRaster("translate_image: empty source image");
    blend = std::clamp(blend, 0.0, 1.0);

    ImageRgb out(src.width(), src.height());
    if (mode == TranslateMode::HistogramMatch) {
        const auto lut = detail::match_luts(detail::channel_cdfs(src), detail::channel_cdfs(ref));
        for (std::size_t i = 0; i < src.size(); ++i) {
            const Rgb8 p = src[i];
            out[i] = {detail::blend_u8(lut[0][p.r], p.r, blend),
                      detail::blend_u8(lut[1][p.g], p.g, blend),
                      detail::blend_u8(lut[2][p.b], p.b, blend)};
        }
    } else {
        const auto ms = detail::moments(src);
        const auto mr = detail::moments(ref);
        std::array<double, 3> scale{}, shift{};
        for (int c = 0; c < 3; ++c) {
            scale[c] = ms.std[c] > 1e-9 ? mr.std[c] / ms.std[c] : 0.0;
            shift[c] = mr.mean[c];
        }
        for (std::size_t i = 0; i < src.size(); ++i) {
            const Rgb8 p = src[i];
            const double v[3] = {static_cast<double>(p.r), static_cast<double>(p.g),
                                 static_cast<double>(p.b)};
            std::array<double, 3> mapped{};
            for (int c = 0; c < 3; ++c)
                mapped[c] = (v[c] - ms.mean[c]) * scale[c] + shift[c];
            out[i] = {detail::blend_u8(mapped[0], v[0], blend),
                      detail::blend_u8(mapped[1], v[1], blend),
                      detail::blend_u8(mapped[2], v[2], blend)};
        }
    }
    return out;
}

} // namespace geosynth::adapt
