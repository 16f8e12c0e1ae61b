#include "pedsim/forces.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pedsim/errors.hpp"

namespace pedsim {

namespace {

// Centers closer than this count as exactly on a wall segment.
constexpr double kOnWallEps = 1e-12;

void require_unit(Vec2 e, const char* what) {
    if (std::abs(e.norm() - 1.0) > 1e-9)
        throw ContractError(std::string(what) + " must be a unit vector");
}

void require_distinct(const PedestrianState& i, const PedestrianState& j) {
    if (dist2(i.position, j.position) <= 0.0)
        throw ContractError("degenerate geometry: pedestrians " +
                            std::to_string(i.id) + " and " + std::to_string(j.id) +
                            " have coincident positions");
}

}  // namespace

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 <= 0.0) return a;
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    return dist(p, closest_point_on_segment(p, a, b));
}

Vec2 motion_direction(Vec2 velocity, Vec2 desired_dir) {
    const double speed = velocity.norm();
    if (speed < kMotionSpeedEps) return desired_dir;
    return velocity / speed;
}

Vec2 driving_force(Vec2 v, Vec2 e, double v0, double tau) {
    require_unit(e, "driving direction");
    if (!(tau > 0.0)) throw ContractError("tau must be positive");
    return (e * v0 - v) / tau;
}

double anisotropy_weight_cos(double cos_phi, double lambda) {
    cos_phi = std::clamp(cos_phi, -1.0, 1.0);
    return lambda + (1.0 - lambda) * (1.0 + cos_phi) / 2.0;
}

double anisotropy_weight(double phi, double lambda) {
    return anisotropy_weight_cos(std::cos(phi), lambda);
}

Vec2 scaled_separation(Vec2 s, Vec2 e_motion, double ls) {
    const double s_par = s.dot(e_motion);
    const double s_perp = s.dot(e_motion.perp_ccw());
    return {ls * s_par, s_perp};
}

Vec2 social_mean_force(const PedestrianState& i, const PedestrianState& j,
                       Vec2 e_i, const ModelParams& p) {
    require_distinct(i, j);
    const Vec2 s = j.position - i.position;
    const Vec2 s_t = scaled_separation(s, e_i, p.longitudinal_scale);
    const Vec2 y_t = scaled_separation((j.velocity - i.velocity) * p.velocity_dependence,
                                       e_i, p.longitudinal_scale);
    const double sn = s_t.norm();
    const double syn = (s_t - y_t).norm();
    // radicand is non-negative by the triangle inequality; clamp roundoff
    const double radicand = std::max(0.0, (sn + syn) * (sn + syn) - y_t.norm2());
    const double b_eff = 0.5 * std::sqrt(radicand);
    const double mag =
        p.a_social_mean * std::exp((i.radius + j.radius - b_eff) / p.b_social_mean);
    const double d = s.norm();
    const double w = anisotropy_weight_cos(e_i.dot(s) / d, p.lambda_anisotropy);
    // repulsive: points from j toward i
    return s * (-mag * w / d);
}

Vec2 social_iso_force(const PedestrianState& i, const PedestrianState& j,
                      const ModelParams& p) {
    require_distinct(i, j);
    const Vec2 diff = i.position - j.position;
    const double d = diff.norm();
    const double mag =
        p.a_social_iso * std::exp((i.radius + j.radius - d) / p.b_social_iso);
    return diff * (mag / d);
}

Vec2 contact_force_ped(const PedestrianState& i, const PedestrianState& j,
                       const ModelParams& p) {
    require_distinct(i, j);
    const Vec2 diff = i.position - j.position;
    const double d = diff.norm();
    const double overlap = std::max(0.0, i.radius + j.radius - d);
    if (overlap == 0.0) return {};
    const Vec2 n = diff / d;
    Vec2 f = n * (p.k_physical_ped * overlap);
    if (p.friction_coefficient != 0.0) {
        const Vec2 t = n.perp_ccw();
        const double dv_t = (j.velocity - i.velocity).dot(t);
        f += t * (p.friction_coefficient * overlap * dv_t);
    }
    return f;
}

Vec2 wall_force(const PedestrianState& i, const WallSegment& w,
                const ModelParams& p) {
    const Vec2 ab = w.b - w.a;
    const double len2 = ab.norm2();
    if (len2 <= 0.0) throw ContractError("wall segment has zero length");

    const double t_raw = (i.position - w.a).dot(ab) / len2;
    const Vec2 q = w.a + ab * std::clamp(t_raw, 0.0, 1.0);
    const Vec2 diff = i.position - q;
    const double d = diff.norm();

    if (d <= kOnWallEps) {
        // center exactly on the segment: the geometry alone cannot say which
        // way is out, so the recorded side must decide
        if (!w.outward_side)
            throw ContractError("pedestrian center on a wall with no recorded side");
        return *w.outward_side * (p.k_physical_border * i.radius);
    }
    if (t_raw > 0.0 && t_raw < 1.0 && w.outward_side &&
        diff.dot(*w.outward_side) < 0.0) {
        // center slipped past the wall line within the segment's span: a
        // plain overlap force would push it deeper, so restore it toward the
        // recorded side with the full penetration depth. Only within a body
        // radius of the line, though -- further out the center is in whatever
        // lies beyond the segment (e.g. open space downstream of a short
        // entrance flank), where a per-segment rule must not apply force.
        if (d > i.radius) return {};
        return *w.outward_side * (p.k_physical_border * (i.radius + d));
    }
    const double overlap = std::max(0.0, i.radius - d);
    if (overlap == 0.0) return {};
    return diff * (p.k_physical_border * overlap / d);
}

Vec2 side_bias_force(const PedestrianState& i, const PedestrianState& j,
                     Vec2 e_i, Vec2 f_mean_ij, const ModelParams& p) {
    if (p.side_preference == SidePreference::None) return {};
    const Vec2 s = j.position - i.position;
    const double d = s.norm();
    if (d <= 0.0) return {};
    if (e_i.dot(s) / d <= 0.9) return {};               // not nearly head-on
    if ((j.velocity - i.velocity).dot(s) >= 0.0) return {};  // not closing
    const Vec2 r_hat =
        p.side_preference == SidePreference::Right ? e_i.perp_cw() : e_i.perp_ccw();
    return r_hat * (p.side_bias_strength * f_mean_ij.norm());
}

std::vector<std::uint32_t> select_neighbors(const PedestrianState& i,
                                            std::span<const PedestrianState> others,
                                            int n) {
    std::vector<std::pair<double, std::uint32_t>> cand;
    cand.reserve(others.size());
    for (const PedestrianState& j : others) {
        if (j.id == i.id || j.exited) continue;
        cand.emplace_back(dist2(i.position, j.position), j.id);
    }
    std::sort(cand.begin(), cand.end());
    const std::size_t take = std::min(cand.size(), n > 0 ? std::size_t(n) : 0);
    std::vector<std::uint32_t> ids(take);
    for (std::size_t k = 0; k < take; ++k) ids[k] = cand[k].second;
    return ids;
}

ForceBreakdown assemble_forces(const PedestrianState& i, Vec2 e_desired,
                               std::span<const PedestrianState> population,
                               std::span<const std::uint32_t> social_ids,
                               std::span<const std::uint32_t> contact_ids,
                               std::span<const WallSegment> walls,
                               const ModelParams& p) {
    ForceBreakdown fb;
    fb.driving = driving_force(i.velocity, e_desired, i.desired_speed, p.tau);
    const Vec2 e_i = motion_direction(i.velocity, e_desired);
    for (std::uint32_t id : social_ids) {
        const PedestrianState& j = population[id];
        const Vec2 f_mean = social_mean_force(i, j, e_i, p);
        fb.social_mean += f_mean;
        fb.social_iso += social_iso_force(i, j, p);
        fb.side_bias += side_bias_force(i, j, e_i, f_mean, p);
    }
    for (std::uint32_t id : contact_ids)
        fb.contact += contact_force_ped(i, population[id], p);
    for (const WallSegment& w : walls) fb.contact += wall_force(i, w, p);
    fb.total = fb.driving + fb.social_mean + fb.social_iso + fb.contact + fb.side_bias;
    return fb;
}

ForceBreakdown total_acceleration(const PedestrianState& i,
                                  std::span<const PedestrianState> population,
                                  std::span<const WallSegment> walls,
                                  Vec2 e_desired, const ModelParams& p) {
    if (i.exited) throw ContractError("total_acceleration on an exited pedestrian");

    std::vector<std::uint32_t> social = select_neighbors(i, population, p.neighbor_limit);
    std::sort(social.begin(), social.end());  // sums run in ascending id order

    std::vector<std::uint32_t> contact;
    for (const PedestrianState& j : population) {
        if (j.id == i.id || j.exited) continue;
        const double r_sum = i.radius + j.radius;
        if (dist2(i.position, j.position) < r_sum * r_sum) contact.push_back(j.id);
    }

    return assemble_forces(i, e_desired, population, social, contact, walls, p);
}

}  // namespace pedsim
