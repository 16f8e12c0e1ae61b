#pragma once

#include <cstdint>
#include <vector>

#include "pedsim/forces.hpp"
#include "pedsim/geometry.hpp"
#include "pedsim/params.hpp"

namespace pedsim {

struct GeometryConfig {
    double corridor_halfwidth = 2.0;  // m
    double bottleneck_depth = 0.4;    // m
    double front_distance = 2.5;      // m, spawn front edge to bottleneck entrance
    double spawn_width = 4.0;         // m
    double spawn_density = 3.0;       // 1/m^2
    double removal_offset = 1.0;      // m past the measurement line
};

// Bottleneck corridor geometry. Walking direction is +x; the bottleneck
// entrance plane is x=0 and the opening is centered on y=0.
struct Scenario {
    double width = 1.0;  // m, clear bottleneck width
    std::vector<WallSegment> walls;
    // The solid areas the walls bound (flank blocks, space beyond the
    // corridor sides). Centers must never sit deep inside these; the engine's
    // invariant check measures penetration against them.
    std::vector<Rect> solid_regions;
    Rect spawn_region;
    Vec2 opening_a;  // entrance-plane opening segment endpoints
    Vec2 opening_b;
    double measurement_line = 0.4;  // x of the bottleneck exit plane
    double removal_line = 1.4;      // x past which pedestrians leave the simulation
    double corridor_halfwidth = 2.0;
    double bottleneck_depth = 0.4;
};

// Builds walls, opening, spawn region and measurement/removal lines.
// n_spawn sizes the spawn region: depth = n/(spawn_density*spawn_width).
// Throws InputError for non-positive dimensions or width >=
// 2*corridor_halfwidth (no constriction).
Scenario build_bottleneck_scenario(double width, const GeometryConfig& cfg = {},
                                   int n_spawn = 100);

// A bottleneck narrower than a body diameter is accepted but not passable;
// callers should warn.
bool passable(const Scenario& s, double radius);

// Seeded rejection sampling inside s.spawn_region: no two centers closer
// than 2*radius, no center within radius of a wall, everyone at rest.
// Deterministic given (s, n, params, seed). Throws InputError if sampling
// fails after 1e5*n attempts (density infeasible).
std::vector<PedestrianState> spawn_pedestrians(const Scenario& s, int n,
                                               const ModelParams& params,
                                               std::uint64_t seed);

// Upstream (x<0): unit vector toward the nearest point of the radius-inset
// opening. Downstream (x>=0): (1, 0).
Vec2 desired_direction(const PedestrianState& ped, const Scenario& s);

}  // namespace pedsim
