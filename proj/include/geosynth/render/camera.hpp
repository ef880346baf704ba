#pragma once

#include <cmath>
#include <numbers>

#include "geosynth/core/error.hpp"
#include "geosynth/core/geometry.hpp"
#include "geosynth/paramgen/plan.hpp"

namespace geosynth::render {

/// Orthographic sensor. Pixel centers map affinely onto the z=0 ground
/// plane (north-up, row 0 at max y); all view rays share one direction whose
/// horizontal component points along the sensor azimuth. At look_angle = 0
/// the ray is exactly vertical and each pixel owns one ground column.
class Camera {
public:
    Camera() = default;

    Camera(double azimuth_deg, double look_angle_deg, double gsd, int image_size)
        : gsd_(gsd), size_(image_size) {
        if (gsd <= 0.0 || image_size <= 0)
            throw ConfigError("camera requires positive gsd and image size");
        const double az = azimuth_deg * std::numbers::pi / 180.0;
        const double look = look_angle_deg * std::numbers::pi / 180.0;
        const double s = std::sin(look);
        dir_ = normalized(Vec3{s * std::sin(az), s * std::cos(az), -std::cos(look)});
    }

    double gsd() const { return gsd_; }
    int image_size() const { return size_; }
    double footprint() const { return gsd_ * size_; }

    /// Descending unit view direction (d.z < 0).
    Vec3 view_dir() const { return dir_; }

    /// Center of pixel (px, py) on the ground plane, scene frame.
    Vec2 pixel_to_ground(double px, double py) const {
        return {(px + 0.5) * gsd_, (size_ - 1 - py + 0.5) * gsd_};
    }

    Vec2 ground_to_pixel(Vec2 g) const {
        return {g.x / gsd_ - 0.5, size_ - 1 - (g.y / gsd_ - 0.5)};
    }

    /// Ground anchor of an arbitrary scene point: where its view ray crosses
    /// z = 0. The anchor determines which pixel sees the point.
    Vec2 anchor_of(Vec3 p) const {
        const double t = p.z / dir_.z;
        return {p.x - t * dir_.x, p.y - t * dir_.y};
    }

private:
    Vec3 dir_{0.0, 0.0, -1.0};
    double gsd_ = 0.35;
    int size_ = 512;
};

inline Camera build_camera(const paramgen::SensorParams& sensor) {
    return Camera(sensor.azimuth_deg, sensor.look_angle_deg, sensor.gsd, sensor.image_size);
}

} // namespace geosynth::render
