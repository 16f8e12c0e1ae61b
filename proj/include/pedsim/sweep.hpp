#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedsim/measurement.hpp"
#include "pedsim/params.hpp"
#include "pedsim/scenario.hpp"

namespace pedsim {

struct SweepConfig {
    std::vector<ParameterSetId> sets{kAllParameterSets.begin(),
                                     kAllParameterSets.end()};
    std::vector<double> widths{0.4, 0.5, 0.6, 0.7, 0.8, 1.0};
    int replications = 10;
    std::uint64_t base_seed = 1;
    int n_pedestrians = 100;
    double dt = 0.05;
    double t_max = 600.0;
    GeometryConfig geometry;
    int jobs = 0;  // worker cap for the matrix; 0 = hardware default
    bool check_invariants = false;
};

// Throws InputError: replications >= 1, widths positive and strictly
// ascending, n >= 2, dt/t_max positive, sets non-empty and unique.
void validate(const SweepConfig& cfg);

// The documented, stable seed schedule. set_index is the canonical ordinal
// of the parameter set (P0=0 .. P7=7) so a subset sweep reproduces the full
// sweep's seeds; width_index is the position in cfg.widths.
std::uint64_t schedule_seed(std::uint64_t base_seed, ParameterSetId set,
                            int width_index, int replication);

// Runs every (set, width, replication) cell. Cells execute in parallel up to
// cfg.jobs workers; records always come back in (set, width, replication)
// order with identical bytes regardless of worker count. Incomplete runs are
// flagged, not dropped.
std::vector<FlowRecord> run_matrix(const SweepConfig& cfg);

struct ScalingRow {
    std::string parameter_set;
    std::vector<double> ratios;  // flux(set,width)/flux(ref,width), by width
    double mean_ratio = 0.0;
    double cv = 0.0;  // std/mean over widths; 0 for a single width
};

struct ScalingReport {
    std::string reference;
    std::vector<ScalingRow> rows;  // one per non-reference set, sorted by label
};

// Ratios of mean flux vs the reference set, per width; aggregates completed
// replications only. Throws InputError when the reference lacks a width that
// another set has.
ScalingReport scaling_report(std::span<const FlowRecord> records,
                             ParameterSetId reference);

struct ExperimentRow {
    std::string source;
    double width_m = 0.0;
    int n_participants = 0;
    double total_time_s = 0.0;
};

// Header-checked parse of `source,width_m,n_participants,total_time_s`.
// Throws InputError with the offending line number.
std::vector<ExperimentRow> parse_experiments_csv(std::istream& is);

struct ComparisonRow {
    double width_m = 0.0;
    bool has_simulation = false;
    double sim_mean_total_time_s = 0.0;
    double exp_min_scaled_s = 0.0;
    double exp_max_scaled_s = 0.0;
    int n_experiments = 0;
    bool inside = false;
};

// Experimental totals rescaled to 100 participants, then min/max per width
// against the simulated mean total time of `set_label` rows in `summary`.
std::vector<ComparisonRow> compare_with_experiments(
    std::span<const AggregateRow> summary,
    std::span<const ExperimentRow> experiments, const std::string& set_label);

struct AnalysisOptions {
    FluxDef flux_def = FluxDef::Gaps;
    std::string compare_set = "P0";
    std::optional<std::vector<ExperimentRow>> experiments;
};

// Re-derives flux columns from (n, total_time, width) under the chosen flux
// definition; completed flags and total times pass through.
std::vector<FlowRecord> rederive_flux(std::span<const FlowRecord> records,
                                      FluxDef def);

// Human-readable analysis: per set a linear fit of mean flux vs width, the
// specific-flux minimum (or "none"), scaling vs P0, incomplete-run counts,
// and the optional experiment comparison table.
std::string analysis_report(std::span<const FlowRecord> records,
                            std::span<const AggregateRow> summary,
                            const AnalysisOptions& opts);

}  // namespace pedsim
