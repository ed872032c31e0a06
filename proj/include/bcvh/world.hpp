#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "bcvh/view.hpp"

namespace bcvh {

struct Point {
    double x = 0;
    double y = 0;

    bool operator==(const Point&) const = default;
};

inline double distance(const Point& a, const Point& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

struct Pose {
    double x = 0;
    double y = 0;
    double heading = 0;  // radians in [0, 2*pi); panoramic sensing ignores it

    Point position() const { return {x, y}; }
};

struct Obstacle {
    Point center;
    double radius = 0;
};

// Flat rectangular arena with point landmarks and circular obstacles.
// Obstacles occlude sight lines; motion is not blocked (no physics).
struct World {
    double arena_width = 0;
    double arena_height = 0;
    std::map<LandmarkId, Point> landmarks;
    std::vector<Obstacle> obstacles;
    LandmarkId goal_landmark;
    double sensor_range = 0;
};

// Minimum distance from point p to the segment a-b.
inline double point_segment_distance(const Point& p, const Point& a, const Point& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return distance(p, a);
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, {a.x + t * dx, a.y + t * dy});
}

// The open sight line from `eye` to `target` is blocked when it passes
// strictly inside an obstacle disk. Tangency does not block.
inline bool sight_line_blocked(const World& world, const Point& eye, const Point& target) {
    for (const auto& ob : world.obstacles) {
        if (point_segment_distance(ob.center, eye, target) < ob.radius) return true;
    }
    return false;
}

// World-frame bearing from `from` to `to`, normalized to [0, 2*pi).
inline double bearing(const Point& from, const Point& to) {
    double a = std::atan2(to.y - from.y, to.x - from.x);
    if (a < 0) a += 2 * std::numbers::pi;
    return a;
}

// Sector index: floor(bearing / 60 degrees), so due east lands in sector 0
// and due north in sector 1.
inline size_t bearing_sector(double bearing_rad) {
    auto s = static_cast<size_t>(bearing_rad / (std::numbers::pi / 3));
    return s >= kSectorCount ? kSectorCount - 1 : s;
}

// A landmark is visible iff it is within sensor range and its sight line is
// unoccluded; it lands in the sector its bearing falls into.
inline PanoramicView compute_view(const World& world, const Pose& pose) {
    PanoramicView view;
    const Point eye = pose.position();
    for (const auto& [id, pos] : world.landmarks) {
        if (distance(eye, pos) > world.sensor_range) continue;
        if (sight_line_blocked(world, eye, pos)) continue;
        view.sectors[bearing_sector(bearing(eye, pos))].insert(id);
    }
    return view;
}

// Landmarks both views contain, regardless of sector placement.
inline std::set<LandmarkId> common_landmarks(const PanoramicView& a,
                                             const PanoramicView& b) {
    std::set<LandmarkId> fa = a.flattened();
    std::set<LandmarkId> fb = b.flattened();
    std::set<LandmarkId> out;
    std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(),
                          std::inserter(out, out.begin()));
    return out;
}

}  // namespace bcvh
