#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pedsim/engine.hpp"

namespace pedsim {

// One sweep cell: a single replication of (parameter set, width). Incomplete
// (jammed) runs carry NaN in the derived columns and completed=false.
struct FlowRecord {
    std::string parameter_set;
    double width_m = 0.0;
    int replication = 0;
    std::uint64_t seed = 0;
    int n_pedestrians = 0;
    bool completed = false;
    double total_time_s = 0.0;
    double flux_per_s = 0.0;
    double specific_flux_per_m_s = 0.0;
    // carried from RunResult for checked sweeps; not a CSV column
    std::int64_t invariant_violations = 0;
};

// Aggregate over the completed replications of one (set, width) group.
struct AggregateRow {
    std::string parameter_set;
    double width_m = 0.0;
    int n_reps = 0;
    double mean_total_time_s = 0.0;
    double std_total_time_s = 0.0;
    double mean_flux_per_s = 0.0;
    double std_flux_per_s = 0.0;
    double mean_specific_flux_per_m_s = 0.0;
    double std_specific_flux_per_m_s = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Which flux definition analysis uses: Gaps counts the n-1 inter-passage
// gaps, J = (n-1)/T; NOverT is the naive n/T.
enum class FluxDef { Gaps, NOverT };

FluxDef flux_def_from_string(std::string_view s);  // "gaps" | "n_over_t"
std::string to_string(FluxDef def);

// Time from the start signal (t=0) until the last passage. Throws InputError
// for incomplete or empty results.
double total_time(const RunResult& r);

// J = (n-1)/T. Requires n >= 2 and T > 0 (throws InputError otherwise).
double flux(int n, double total_time_s);
double flux_n_over_t(int n, double total_time_s);

// j = J / width.
double specific_flux(double flux_per_s, double width_m);

// Rescale an n-participant total to the 100-participant equivalent:
// t * 99/(n-1). Requires n >= 2.
double scale_total_time(double total_time_s, int n_participants);

// Group completed records by (set, width): mean and sample standard
// deviation (n-1 denominator; 0 for a single replication) of total time,
// flux and specific flux. Rows sorted by set label, then ascending width.
// Incomplete records are skipped.
std::vector<AggregateRow> aggregate(std::span<const FlowRecord> records);

// Ordinary least squares y on x. Requires >= 2 points and at least two
// distinct x values (throws InputError). r_squared = 1 - SS_res/SS_tot,
// taken as 1 when SS_tot is zero (constant y is fit exactly).
LinearFit linear_fit(std::span<const std::pair<double, double>> points);

// Width of the interior strict local minimum of a (width, specific flux)
// series sorted by ascending width; nullopt when none. With several minima,
// the smallest value wins, ties broken by smaller width. Requires >= 3
// points (throws InputError).
std::optional<double> specific_flux_minimum(
    std::span<const std::pair<double, double>> series);

}  // namespace pedsim
