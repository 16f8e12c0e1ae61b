#include "pedsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pedsim/errors.hpp"

namespace pedsim {

namespace {

// mt19937_64 is fully specified by the standard; mapping the raw 64-bit draws
// ourselves keeps spawns bit-identical across standard library versions
// (std::uniform_real_distribution is implementation-defined).
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
    // Box-Muller; u1 in (0, 1] so the log stays finite
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void require_positive(double v, const char* field) {
    if (!(std::isfinite(v) && v > 0.0))
        throw InputError(std::string(field) + " must be positive and finite");
}

}  // namespace

Scenario build_bottleneck_scenario(double width, const GeometryConfig& cfg,
                                   int n_spawn) {
    require_positive(width, "width");
    require_positive(cfg.corridor_halfwidth, "corridor_halfwidth");
    require_positive(cfg.bottleneck_depth, "bottleneck_depth");
    require_positive(cfg.front_distance, "front_distance");
    require_positive(cfg.spawn_width, "spawn_width");
    require_positive(cfg.spawn_density, "spawn_density");
    require_positive(cfg.removal_offset, "removal_offset");
    if (n_spawn < 1) throw InputError("n_spawn must be >= 1");
    if (width >= 2.0 * cfg.corridor_halfwidth)
        throw InputError(
            "bottleneck width must be smaller than the corridor width (no "
            "constriction otherwise)");

    const double half_w = width / 2.0;
    const double ch = cfg.corridor_halfwidth;
    const double depth = cfg.bottleneck_depth;
    const double spawn_depth = n_spawn / (cfg.spawn_density * cfg.spawn_width);
    const double x_back = -(cfg.front_distance + spawn_depth + 1.0);

    Scenario s;
    s.width = width;
    s.corridor_halfwidth = ch;
    s.bottleneck_depth = depth;
    s.measurement_line = depth;
    s.removal_line = depth + cfg.removal_offset;
    s.opening_a = {0.0, -half_w};
    s.opening_b = {0.0, half_w};
    s.spawn_region = {{-cfg.front_distance - spawn_depth, -cfg.spawn_width / 2.0},
                      {-cfg.front_distance, cfg.spawn_width / 2.0}};
    // corridor sides, entrance flanks, bottleneck passage; outward_side is
    // where pedestrians walk
    s.walls = {
        {{x_back, ch}, {0.0, ch}, Vec2{0.0, -1.0}},
        {{x_back, -ch}, {0.0, -ch}, Vec2{0.0, 1.0}},
        {{0.0, half_w}, {0.0, ch}, Vec2{-1.0, 0.0}},
        {{0.0, -ch}, {0.0, -half_w}, Vec2{-1.0, 0.0}},
        {{0.0, half_w}, {depth, half_w}, Vec2{0.0, -1.0}},
        {{0.0, -half_w}, {depth, -half_w}, Vec2{0.0, 1.0}},
    };
    // the two flank blocks plus the space beyond the corridor sides (tall
    // enough that no center can overshoot them)
    const double far = ch + 50.0;
    s.solid_regions = {
        {{0.0, half_w}, {depth, ch}},
        {{0.0, -ch}, {depth, -half_w}},
        {{x_back, ch}, {0.0, far}},
        {{x_back, -far}, {0.0, -ch}},
    };
    return s;
}

bool passable(const Scenario& s, double radius) {
    return s.width > 2.0 * radius;
}

std::vector<PedestrianState> spawn_pedestrians(const Scenario& s, int n,
                                               const ModelParams& params,
                                               std::uint64_t seed) {
    if (n < 1) throw InputError("spawn count must be >= 1");

    std::mt19937_64 rng(seed);
    const Rect region = s.spawn_region;
    const std::uint64_t max_attempts = 100000ULL * static_cast<std::uint64_t>(n);
    std::uint64_t attempts = 0;

    std::vector<PedestrianState> out;
    out.reserve(n);

    for (int k = 0; k < n; ++k) {
        Vec2 pos;
        for (;;) {
            if (attempts >= max_attempts)
                throw InputError(
                    "spawn rejection sampling failed after " +
                    std::to_string(max_attempts) +
                    " attempts: spawn density infeasible for this geometry");
            ++attempts;
            pos = {region.lo.x + (region.hi.x - region.lo.x) * uniform_unit(rng),
                   region.lo.y + (region.hi.y - region.lo.y) * uniform_unit(rng)};

            bool ok = true;
            for (const PedestrianState& other : out) {
                if (dist2(pos, other.position) <
                    4.0 * params.radius * params.radius) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (const WallSegment& w : s.walls) {
                if (point_segment_distance(pos, w.a, w.b) < params.radius) {
                    ok = false;
                    break;
                }
            }
            if (ok) break;
        }

        double v0 = params.desired_speed_mean;
        if (params.desired_speed_sd > 0.0)
            v0 = std::max(0.1, v0 + params.desired_speed_sd * gaussian(rng));

        PedestrianState ped;
        ped.id = static_cast<std::uint32_t>(k);
        ped.position = pos;
        ped.velocity = {0.0, 0.0};
        ped.desired_speed = v0;
        ped.radius = params.radius;
        out.push_back(ped);
    }
    return out;
}

Vec2 desired_direction(const PedestrianState& ped, const Scenario& s) {
    if (ped.exited)
        throw ContractError("desired_direction on an exited pedestrian");
    if (ped.position.x >= 0.0) return {1.0, 0.0};
    // head for the nearest point of the opening shrunk by the body radius
    const double inset_half = std::max(0.0, s.width / 2.0 - ped.radius);
    const double ty = std::clamp(ped.position.y, -inset_half, inset_half);
    const Vec2 to_target = Vec2{0.0, ty} - ped.position;
    return to_target / to_target.norm();
}

}  // namespace pedsim
