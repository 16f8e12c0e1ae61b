#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace pedsim {

enum class SidePreference { Right, Left, None };

enum class ParameterSetId { P0, P1, P2, P3, P4, P5, P6, P7 };

inline constexpr std::array<ParameterSetId, 8> kAllParameterSets = {
    ParameterSetId::P0, ParameterSetId::P1, ParameterSetId::P2,
    ParameterSetId::P3, ParameterSetId::P4, ParameterSetId::P5,
    ParameterSetId::P6, ParameterSetId::P7,
};

// Full force-model parameter record. Every built-in set differs from P0 in
// exactly one field.
struct ModelParams {
    double radius = 0.15;               // m, body radius
    double a_social_mean = 0.5;         // m/s^2, mean (anisotropic) force strength
    double b_social_mean = 2.8;         // m, mean force range
    double k_physical_border = 100.0;   // 1/s^2, wall contact stiffness
    double k_physical_ped = 100.0;      // 1/s^2, body contact stiffness
    double a_social_iso = 25.0;         // m/s^2, isotropic force strength
    double b_social_iso = 0.2;          // m, isotropic force range
    double tau = 0.4;                   // s, driving relaxation time
    double friction_coefficient = 0.0;  // tangential contact coefficient
    SidePreference side_preference = SidePreference::Right;
    double velocity_dependence = 2.0;   // s, look-ahead horizon for the mean force
    double lambda_anisotropy = 0.1;     // dimensionless, in [0, 1]
    double longitudinal_scale = 0.25;   // dimensionless, > 0
    int neighbor_limit = 5;             // consider at most this many neighbors
    double desired_speed_mean = 1.34;   // m/s
    double desired_speed_sd = 0.0;      // m/s
    double v_max_factor = 1.3;          // speed clamp: v_max = factor * desired_speed
    double side_bias_strength = 0.1;    // dimensionless

    bool operator==(const ModelParams&) const = default;
};

ModelParams builtin_parameter_set(ParameterSetId id);

// Empty result means every invariant holds; otherwise one message per
// violated invariant, each naming the offending field.
std::vector<std::string> validate_params(const ModelParams& p);

std::string to_string(ParameterSetId id);
std::string to_string(SidePreference s);

// Throw InputError on unknown names.
ParameterSetId parameter_set_from_string(std::string_view s);
SidePreference side_preference_from_string(std::string_view s);

// key=value lines, one per field, in declaration order.
std::string format_params(const ModelParams& p);

}  // namespace pedsim
