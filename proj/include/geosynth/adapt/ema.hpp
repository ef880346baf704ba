#pragma once

#include <span>
#include <vector>

#include "geosynth/core/error.hpp"

namespace geosynth::adapt {

using ParamVector = std::vector<double>;

/// Teacher update: theta_t <- alpha * theta_t + (1 - alpha) * theta_s,
/// elementwise. With a constant student the teacher-student gap contracts by
/// exactly alpha per step.
inline ParamVector ema_update(std::span<const double> theta_t, std::span<const double> theta_s,
                              double alpha) {
    if (theta_t.size() != theta_s.size())
        throw LengthMismatch("ema_update: parameter vectors differ in length");
    if (alpha < 0.0 || alpha > 1.0)
        throw ConfigError("ema_update: alpha must lie in [0,1]");
    ParamVector out(theta_t.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = alpha * theta_t[i] + (1.0 - alpha) * theta_s[i];
    return out;
}

} // namespace geosynth::adapt
