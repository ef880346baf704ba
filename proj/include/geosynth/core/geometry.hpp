#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace geosynth {

struct Vec2 {
    double x = 0.0, y = 0.0;

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3 operator+(Vec3 r) const { return {x + r.x, y + r.y, z + r.z}; }
    constexpr Vec3 operator-(Vec3 r) const { return {x - r.x, y - r.y, z - r.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 v) { return std::sqrt(dot(v, v)); }
inline constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double length(Vec3 v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(Vec3 v) {
    const double l = length(v);
    return l > 0.0 ? Vec3{v.x / l, v.y / l, v.z / l} : v;
}

using Polygon = std::vector<Vec2>;
using Polyline = std::vector<Vec2>;

inline double signed_area(const Polygon& p) {
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % p.size()];
        a += cross(u, v);
    }
    return 0.5 * a;
}

inline bool is_ccw(const Polygon& p) { return signed_area(p) > 0.0; }

/// Crossing-number test. Points exactly on an edge are not guaranteed a
/// stable answer; callers that care keep geometry off pixel centers.
inline bool point_in_polygon(Vec2 pt, const Polygon& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > pt.y) != (b.y > pt.y)) {
            const double xint = a.x + (pt.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (pt.x < xint)
                inside = !inside;
        }
    }
    return inside;
}

namespace detail {
inline bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}
} // namespace detail

/// True when the interiors of two simple polygons overlap. Shared edges or
/// touching corners do not count.
inline bool polygons_interior_overlap(const Polygon& a, const Polygon& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (detail::segments_properly_intersect(a[i], a[(i + 1) % a.size()], b[j],
                                                    b[(j + 1) % b.size()]))
                return true;
    for (const Vec2& p : a)
        if (point_in_polygon(p, b))
            return true;
    for (const Vec2& p : b)
        if (point_in_polygon(p, a))
            return true;
    return false;
}

struct Bounds2 {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

    void expand(Vec2 p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }

    static Bounds2 of(const Polygon& poly) {
        Bounds2 b{poly[0].x, poly[0].y, poly[0].x, poly[0].y};
        for (const Vec2& p : poly)
            b.expand(p);
        return b;
    }
};

/// Rectangle in the scene plane: center, half extents, rotation (radians).
struct OrientedRect {
    Vec2 center;
    double half_u = 0.0; // along the rect's local u axis
    double half_v = 0.0;
    double angle = 0.0;

    Vec2 axis_u() const { return {std::cos(angle), std::sin(angle)}; }
    Vec2 axis_v() const { return {-std::sin(angle), std::cos(angle)}; }

    /// World point -> rect-local coordinates.
    Vec2 to_local(Vec2 p) const {
        const Vec2 d = p - center;
        return {dot(d, axis_u()), dot(d, axis_v())};
    }

    Vec2 to_world(Vec2 local) const { return center + axis_u() * local.x + axis_v() * local.y; }

    bool contains(Vec2 p) const {
        const Vec2 l = to_local(p);
        return std::abs(l.x) <= half_u && std::abs(l.y) <= half_v;
    }

    Polygon corners() const {
        return {to_world({-half_u, -half_v}), to_world({half_u, -half_v}),
                to_world({half_u, half_v}), to_world({-half_u, half_v})};
    }
};

} // namespace geosynth
