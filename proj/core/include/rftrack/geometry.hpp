#pragma once

#include <cmath>
#include <numbers>

namespace rftrack {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Cartesian position in meters, z up.
struct Position3 {
    double px = 0.0;
    double py = 0.0;
    double pz = 0.0;
};

/// UAV pose: position plus heading angle in [0, 2*pi).
/// Heading 0 points along +x, counter-clockwise positive.
struct UavState {
    Position3 position;
    double heading = 0.0;
};

/// Wrap an angle into [0, 2*pi).
inline double normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod can round back up to 2*pi for tiny negative inputs
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Smallest signed difference a - b, in (-pi, pi].
inline double signed_angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

inline double distance(const Position3& a, const Position3& b) {
    const double dx = a.px - b.px;
    const double dy = a.py - b.py;
    const double dz = a.pz - b.pz;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double horizontal_distance(const Position3& a, const Position3& b) {
    const double dx = a.px - b.px;
    const double dy = a.py - b.py;
    return std::sqrt(dx * dx + dy * dy);
}

/// Azimuth from `from` to `to` in the xy-plane, in [0, 2*pi).
/// Coincident xy positions are degenerate; the fallback bearing is 0.
inline double bearing_to(const Position3& from, const Position3& to,
                         bool* degenerate = nullptr) {
    const double dx = to.px - from.px;
    const double dy = to.py - from.py;
    if (dx == 0.0 && dy == 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    if (degenerate) *degenerate = false;
    return normalize_angle(std::atan2(dy, dx));
}

/// Axis-aligned search area, meters.
struct Area {
    double xmin = 0.0;
    double xmax = 0.0;
    double ymin = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool degenerate() const { return xmax <= xmin || ymax <= ymin; }
    bool contains(const Position3& p) const {
        return p.px >= xmin && p.px <= xmax && p.py >= ymin && p.py <= ymax;
    }
    Position3 centroid() const {
        return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax), 0.0};
    }
};

inline double clamp(double v, double lo, double hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

inline Position3 clamp_to_area(const Position3& p, const Area& a) {
    return {clamp(p.px, a.xmin, a.xmax), clamp(p.py, a.ymin, a.ymax), p.pz};
}

/// Reflect a coordinate back into [lo, hi].
inline double reflect(double v, double lo, double hi) {
    const double span = hi - lo;
    if (span <= 0.0) return lo;
    double t = std::fmod(v - lo, 2.0 * span);
    if (t < 0.0) t += 2.0 * span;
    return lo + (t <= span ? t : 2.0 * span - t);
}

}  // namespace rftrack
