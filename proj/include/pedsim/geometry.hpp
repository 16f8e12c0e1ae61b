#pragma once

#include <optional>

#include "pedsim/vec2.hpp"

namespace pedsim {

// A solid wall segment. outward_side is the unit normal of the side
// pedestrians occupy; it disambiguates the push direction for centers that
// end up exactly on (or past) the wall line.
struct WallSegment {
    Vec2 a;
    Vec2 b;
    std::optional<Vec2> outward_side;
};

struct Rect {
    Vec2 lo;
    Vec2 hi;

    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }

    // Distance from p to the nearest edge when p is strictly interior, 0
    // otherwise. Used to measure how deep a center sits inside a solid.
    double interior_depth(Vec2 p) const {
        if (!(p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y)) return 0.0;
        const double dx = p.x - lo.x < hi.x - p.x ? p.x - lo.x : hi.x - p.x;
        const double dy = p.y - lo.y < hi.y - p.y ? p.y - lo.y : hi.y - p.y;
        return dx < dy ? dx : dy;
    }
};

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b);
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

}  // namespace pedsim
