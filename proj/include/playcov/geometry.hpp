#pragma once

#include <algorithm>
#include <cmath>

namespace playcov {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
    double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline double distance_sq(const Vec3& a, const Vec3& b) { return norm_sq(a - b); }
inline Vec3 lerp(const Vec3& a, const Vec3& b, double u) { return a + (b - a) * u; }
inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Axis-aligned box, min corner inclusive.
struct Aabb {
    Vec3 min;
    Vec3 max;

    Vec3 center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5, (min.z + max.z) * 0.5}; }
    Vec3 extent() const { return max - min; }

    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }

    /// Strict overlap: touching faces do not count.
    bool overlaps(const Aabb& o) const {
        return min.x < o.max.x && max.x > o.min.x && min.y < o.max.y && max.y > o.min.y &&
               min.z < o.max.z && max.z > o.min.z;
    }

    /// Non-strict containment of another box.
    bool contains_box(const Aabb& o) const {
        return o.min.x >= min.x && o.max.x <= max.x && o.min.y >= min.y && o.max.y <= max.y &&
               o.min.z >= min.z && o.max.z <= max.z;
    }

    Aabb expanded(double r) const { return {{min.x - r, min.y - r, min.z - r}, {max.x + r, max.y + r, max.z + r}}; }
    Aabb translated(const Vec3& d) const { return {min + d, max + d}; }

    bool valid() const { return max.x > min.x && max.y > min.y && max.z > min.z; }
};

inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a < 0.0) a += 2.0 * M_PI;
    return a;
}

}  // namespace playcov
