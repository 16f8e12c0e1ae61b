#include "pedsim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pedsim/errors.hpp"

namespace pedsim {

FluxDef flux_def_from_string(std::string_view s) {
    if (s == "gaps") return FluxDef::Gaps;
    if (s == "n_over_t") return FluxDef::NOverT;
    throw InputError("unknown flux definition '" + std::string(s) +
                     "' (expected gaps|n_over_t)");
}

std::string to_string(FluxDef def) {
    return def == FluxDef::Gaps ? "gaps" : "n_over_t";
}

double total_time(const RunResult& r) {
    if (!r.completed || r.passage_times.empty())
        throw InputError("total time is undefined for an incomplete run");
    return r.passage_times.back();
}

double flux(int n, double total_time_s) {
    if (n < 2)
        throw InputError("flux is undefined for fewer than two pedestrians");
    if (!(total_time_s > 0.0)) throw InputError("total time must be positive");
    return (n - 1) / total_time_s;
}

double flux_n_over_t(int n, double total_time_s) {
    if (n < 1) throw InputError("flux requires at least one pedestrian");
    if (!(total_time_s > 0.0)) throw InputError("total time must be positive");
    return n / total_time_s;
}

double specific_flux(double flux_per_s, double width_m) {
    if (!(width_m > 0.0)) throw InputError("width must be positive");
    return flux_per_s / width_m;
}

double scale_total_time(double total_time_s, int n_participants) {
    if (n_participants < 2)
        throw InputError("scaling requires at least two participants");
    return total_time_s * 99.0 / (n_participants - 1);
}

namespace {

struct Accumulator {
    std::vector<double> total_time, flux, specific;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// sample standard deviation (n-1); 0 for a single value
double std_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<AggregateRow> aggregate(std::span<const FlowRecord> records) {
    std::map<std::pair<std::string, double>, Accumulator> groups;
    for (const FlowRecord& r : records) {
        if (!r.completed) continue;
        Accumulator& acc = groups[{r.parameter_set, r.width_m}];
        acc.total_time.push_back(r.total_time_s);
        acc.flux.push_back(r.flux_per_s);
        acc.specific.push_back(r.specific_flux_per_m_s);
    }

    std::vector<AggregateRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, acc] : groups) {
        AggregateRow row;
        row.parameter_set = key.first;
        row.width_m = key.second;
        row.n_reps = static_cast<int>(acc.total_time.size());
        row.mean_total_time_s = mean_of(acc.total_time);
        row.std_total_time_s = std_of(acc.total_time, row.mean_total_time_s);
        row.mean_flux_per_s = mean_of(acc.flux);
        row.std_flux_per_s = std_of(acc.flux, row.mean_flux_per_s);
        row.mean_specific_flux_per_m_s = mean_of(acc.specific);
        row.std_specific_flux_per_m_s =
            std_of(acc.specific, row.mean_specific_flux_per_m_s);
        rows.push_back(std::move(row));
    }
    return rows;  // std::map iteration is already (set, width)-sorted
}

LinearFit linear_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2)
        throw InputError("linear fit requires at least two points");

    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n, my = sy / n;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0)
        throw InputError("linear fit is degenerate: all x values are equal");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& [x, y] : points) {
        const double e = y - (fit.slope * x + fit.intercept);
        ss_res += e * e;
        ss_tot += (y - my) * (y - my);
    }
    fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

std::optional<double> specific_flux_minimum(
    std::span<const std::pair<double, double>> series) {
    if (series.size() < 3)
        throw InputError("minimum detection requires at least three widths");
    for (std::size_t i = 1; i < series.size(); ++i)
        if (!(series[i].first > series[i - 1].first))
            throw InputError("series must be sorted by strictly ascending width");

    std::optional<double> best_width;
    double best_value = 0.0;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const double v = series[i].second;
        if (v < series[i - 1].second && v < series[i + 1].second) {
            if (!best_width || v < best_value) {
                best_width = series[i].first;
                best_value = v;
            }
        }
    }
    return best_width;
}

}  // namespace pedsim
