#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pedsim/geometry.hpp"
#include "pedsim/params.hpp"
#include "pedsim/vec2.hpp"

namespace pedsim {

struct PedestrianState {
    std::uint32_t id = 0;
    Vec2 position;
    Vec2 velocity;
    double desired_speed = 1.34;  // m/s
    double radius = 0.15;         // m
    bool exited = false;
    std::optional<double> passage_time;  // s, set once when crossing the measurement line
};

// Diagnostic decomposition of one pedestrian's acceleration.
struct ForceBreakdown {
    Vec2 driving;
    Vec2 social_mean;
    Vec2 social_iso;
    Vec2 contact;
    Vec2 side_bias;
    Vec2 total;
};

// Below this speed a walker's motion direction falls back to the desired
// direction (needed at t=0 when everyone stands still).
inline constexpr double kMotionSpeedEps = 0.01;

Vec2 motion_direction(Vec2 velocity, Vec2 desired_dir);

// (v0*e - v)/tau. e must be a unit vector, tau > 0.
Vec2 driving_force(Vec2 v, Vec2 e, double v0, double tau);

// w = lambda + (1-lambda)*(1+cos phi)/2, in [lambda, 1].
double anisotropy_weight(double phi, double lambda);
double anisotropy_weight_cos(double cos_phi, double lambda);

// Decompose s relative to e_motion and scale the longitudinal component:
// returns (ls*s_par, s_perp) in the motion-aligned frame.
Vec2 scaled_separation(Vec2 s, Vec2 e_motion, double ls);

// Anisotropic mean force with elliptical velocity dependence. e_i is the
// resolved motion direction of i (motion_direction of velocity and desired
// direction).
Vec2 social_mean_force(const PedestrianState& i, const PedestrianState& j,
                       Vec2 e_i, const ModelParams& p);

Vec2 social_iso_force(const PedestrianState& i, const PedestrianState& j,
                      const ModelParams& p);

// Linear body contact: k*overlap along the center line plus an optional
// tangential friction term. Zero without overlap; ignores neighbor_limit.
Vec2 contact_force_ped(const PedestrianState& i, const PedestrianState& j,
                       const ModelParams& p);

Vec2 wall_force(const PedestrianState& i, const WallSegment& w,
                const ModelParams& p);

// Small lateral bias toward the preferred side, active only for closing,
// near-head-on pairs; proportional to the mean-force magnitude.
Vec2 side_bias_force(const PedestrianState& i, const PedestrianState& j,
                     Vec2 e_i, Vec2 f_mean_ij, const ModelParams& p);

// The min(n, #non-exited others) ids nearest to i by center distance,
// ties broken by ascending id; i itself and exited pedestrians excluded.
std::vector<std::uint32_t> select_neighbors(const PedestrianState& i,
                                            std::span<const PedestrianState> others,
                                            int n);

// Shared force assembly. population must be indexable by id
// (population[id].id == id). The id lists control summation order; both must
// be ascending so results stay bit-identical across candidate-search
// strategies.
ForceBreakdown assemble_forces(const PedestrianState& i, Vec2 e_desired,
                               std::span<const PedestrianState> population,
                               std::span<const std::uint32_t> social_ids,
                               std::span<const std::uint32_t> contact_ids,
                               std::span<const WallSegment> walls,
                               const ModelParams& p);

// Brute-force reference: neighbor selection over the whole population,
// contact over all overlapping pedestrians, walls in sequence order.
ForceBreakdown total_acceleration(const PedestrianState& i,
                                  std::span<const PedestrianState> population,
                                  std::span<const WallSegment> walls,
                                  Vec2 e_desired, const ModelParams& p);

}  // namespace pedsim
