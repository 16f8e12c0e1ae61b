#include "pedsim/params.hpp"

#include <cmath>
#include <sstream>

#include "pedsim/csv.hpp"
#include "pedsim/errors.hpp"

namespace pedsim {

ModelParams builtin_parameter_set(ParameterSetId id) {
    ModelParams p;  // defaults are the P0 values
    switch (id) {
        case ParameterSetId::P0: break;
        case ParameterSetId::P1: p.a_social_iso = 10.0; break;
        case ParameterSetId::P2: p.a_social_iso = 100.0; break;
        case ParameterSetId::P3: p.b_social_iso = 0.05; break;
        case ParameterSetId::P4: p.b_social_iso = 0.3; break;
        case ParameterSetId::P5: p.neighbor_limit = 15; break;
        case ParameterSetId::P6: p.a_social_mean = 0.1; break;
        case ParameterSetId::P7: p.a_social_mean = 2.5; break;
    }
    return p;
}

std::vector<std::string> validate_params(const ModelParams& p) {
    std::vector<std::string> v;
    auto positive = [&](double value, const char* field) {
        if (!(std::isfinite(value) && value > 0.0))
            v.push_back(std::string(field) + " must be positive and finite");
    };
    auto non_negative = [&](double value, const char* field) {
        if (!(std::isfinite(value) && value >= 0.0))
            v.push_back(std::string(field) + " must be non-negative and finite");
    };
    positive(p.radius, "radius");
    non_negative(p.a_social_mean, "a_social_mean");
    positive(p.b_social_mean, "b_social_mean");
    non_negative(p.k_physical_border, "k_physical_border");
    non_negative(p.k_physical_ped, "k_physical_ped");
    non_negative(p.a_social_iso, "a_social_iso");
    positive(p.b_social_iso, "b_social_iso");
    positive(p.tau, "tau");
    non_negative(p.friction_coefficient, "friction_coefficient");
    non_negative(p.velocity_dependence, "velocity_dependence");
    if (!(std::isfinite(p.lambda_anisotropy) && p.lambda_anisotropy >= 0.0 &&
          p.lambda_anisotropy <= 1.0))
        v.push_back("lambda_anisotropy must lie in [0, 1]");
    positive(p.longitudinal_scale, "longitudinal_scale");
    if (p.neighbor_limit < 1) v.push_back("neighbor_limit must be >= 1");
    positive(p.desired_speed_mean, "desired_speed_mean");
    non_negative(p.desired_speed_sd, "desired_speed_sd");
    if (!(std::isfinite(p.v_max_factor) && p.v_max_factor >= 1.0))
        v.push_back("v_max_factor must be >= 1");
    non_negative(p.side_bias_strength, "side_bias_strength");
    return v;
}

std::string to_string(ParameterSetId id) {
    return "P" + std::to_string(static_cast<int>(id));
}

std::string to_string(SidePreference s) {
    switch (s) {
        case SidePreference::Right: return "right";
        case SidePreference::Left: return "left";
        case SidePreference::None: return "none";
    }
    return "none";
}

ParameterSetId parameter_set_from_string(std::string_view s) {
    for (ParameterSetId id : kAllParameterSets)
        if (to_string(id) == s) return id;
    throw InputError("unknown parameter set '" + std::string(s) +
                     "' (expected P0..P7)");
}

SidePreference side_preference_from_string(std::string_view s) {
    if (s == "right") return SidePreference::Right;
    if (s == "left") return SidePreference::Left;
    if (s == "none") return SidePreference::None;
    throw InputError("unknown side preference '" + std::string(s) +
                     "' (expected right|left|none)");
}

std::string format_params(const ModelParams& p) {
    std::ostringstream os;
    os << "radius=" << format_double(p.radius) << '\n'
       << "a_social_mean=" << format_double(p.a_social_mean) << '\n'
       << "b_social_mean=" << format_double(p.b_social_mean) << '\n'
       << "k_physical_border=" << format_double(p.k_physical_border) << '\n'
       << "k_physical_ped=" << format_double(p.k_physical_ped) << '\n'
       << "a_social_iso=" << format_double(p.a_social_iso) << '\n'
       << "b_social_iso=" << format_double(p.b_social_iso) << '\n'
       << "tau=" << format_double(p.tau) << '\n'
       << "friction_coefficient=" << format_double(p.friction_coefficient) << '\n'
       << "side_preference=" << to_string(p.side_preference) << '\n'
       << "velocity_dependence=" << format_double(p.velocity_dependence) << '\n'
       << "lambda_anisotropy=" << format_double(p.lambda_anisotropy) << '\n'
       << "longitudinal_scale=" << format_double(p.longitudinal_scale) << '\n'
       << "neighbor_limit=" << p.neighbor_limit << '\n'
       << "desired_speed_mean=" << format_double(p.desired_speed_mean) << '\n'
       << "desired_speed_sd=" << format_double(p.desired_speed_sd) << '\n'
       << "v_max_factor=" << format_double(p.v_max_factor) << '\n'
       << "side_bias_strength=" << format_double(p.side_bias_strength) << '\n';
    return os.str();
}

}  // namespace pedsim
