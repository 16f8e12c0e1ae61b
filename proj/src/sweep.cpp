#include "pedsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "pedsim/csv.hpp"
#include "pedsim/engine.hpp"
#include "pedsim/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pedsim {

void validate(const SweepConfig& cfg) {
    if (cfg.sets.empty()) throw InputError("sweep needs at least one parameter set");
    std::set<ParameterSetId> seen(cfg.sets.begin(), cfg.sets.end());
    if (seen.size() != cfg.sets.size())
        throw InputError("duplicate parameter sets in sweep");
    if (cfg.widths.empty()) throw InputError("sweep needs at least one width");
    for (std::size_t i = 0; i < cfg.widths.size(); ++i) {
        if (!(cfg.widths[i] > 0.0))
            throw InputError("widths must be positive");
        if (i > 0 && !(cfg.widths[i] > cfg.widths[i - 1]))
            throw InputError("widths must be strictly ascending");
    }
    if (cfg.replications < 1) throw InputError("replications must be >= 1");
    if (cfg.n_pedestrians < 2) throw InputError("n must be >= 2");
    if (!(cfg.dt > 0.0)) throw InputError("dt must be positive");
    if (!(cfg.t_max > 0.0)) throw InputError("t_max must be positive");
    if (cfg.jobs < 0) throw InputError("jobs must be >= 0");
}

std::uint64_t schedule_seed(std::uint64_t base_seed, ParameterSetId set,
                            int width_index, int replication) {
    return base_seed + 10000ULL * static_cast<std::uint64_t>(set) +
           100ULL * static_cast<std::uint64_t>(width_index) +
           static_cast<std::uint64_t>(replication);
}

namespace {

FlowRecord to_record(const RunResult& run, const std::string& set_label,
                     int replication) {
    FlowRecord rec;
    rec.parameter_set = set_label;
    rec.width_m = run.width;
    rec.replication = replication;
    rec.seed = run.seed;
    rec.n_pedestrians = run.n_pedestrians;
    rec.completed = run.completed;
    rec.invariant_violations = run.invariant_violations;
    if (run.completed) {
        rec.total_time_s = run.passage_times.back();
        rec.flux_per_s = flux(run.n_pedestrians, rec.total_time_s);
        rec.specific_flux_per_m_s = specific_flux(rec.flux_per_s, run.width);
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.total_time_s = nan;
        rec.flux_per_s = nan;
        rec.specific_flux_per_m_s = nan;
    }
    return rec;
}

}  // namespace

std::vector<FlowRecord> run_matrix(const SweepConfig& cfg) {
    validate(cfg);

    struct Cell {
        ParameterSetId set;
        int width_index;
        int replication;
    };
    std::vector<Cell> cells;
    cells.reserve(cfg.sets.size() * cfg.widths.size() * cfg.replications);
    for (ParameterSetId set : cfg.sets)
        for (std::size_t w = 0; w < cfg.widths.size(); ++w)
            for (int rep = 0; rep < cfg.replications; ++rep)
                cells.push_back({set, static_cast<int>(w), rep});

    const int total = static_cast<int>(cells.size());
    std::vector<RunResult> results(total);
    std::exception_ptr failure;

#ifdef _OPENMP
    int jobs = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#else
    int jobs = 1;
#endif
    jobs = std::min(jobs, total);

#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
    for (int idx = 0; idx < total; ++idx) {
        try {
            const Cell& c = cells[idx];
            const ModelParams params = builtin_parameter_set(c.set);
            const Scenario scenario = build_bottleneck_scenario(
                cfg.widths[c.width_index], cfg.geometry, cfg.n_pedestrians);
            RunOptions opts;
            opts.dt = cfg.dt;
            opts.t_max = cfg.t_max;
            opts.check_invariants = cfg.check_invariants;
            results[idx] =
                run(scenario, params, cfg.n_pedestrians,
                    schedule_seed(cfg.base_seed, c.set, c.width_index,
                                  c.replication),
                    opts);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    // serialize records in (set, width, replication) order regardless of the
    // worker count
    std::vector<FlowRecord> records;
    records.reserve(total);
    for (int idx = 0; idx < total; ++idx)
        records.push_back(to_record(results[idx],
                                    to_string(cells[idx].set),
                                    cells[idx].replication));
    return records;
}

namespace {

// mean flux of completed replications keyed by (set, width)
std::map<std::pair<std::string, double>, double> mean_flux_by_cell(
    std::span<const FlowRecord> records) {
    std::map<std::pair<std::string, double>, std::pair<double, int>> sums;
    for (const FlowRecord& r : records) {
        if (!r.completed) continue;
        auto& [sum, count] = sums[{r.parameter_set, r.width_m}];
        sum += r.flux_per_s;
        count += 1;
    }
    std::map<std::pair<std::string, double>, double> means;
    for (const auto& [key, sc] : sums) means[key] = sc.first / sc.second;
    return means;
}

}  // namespace

ScalingReport scaling_report(std::span<const FlowRecord> records,
                             ParameterSetId reference) {
    const std::string ref_label = to_string(reference);
    const auto means = mean_flux_by_cell(records);

    std::map<std::string, std::vector<std::pair<double, double>>> per_set;
    for (const auto& [key, mean] : means)
        per_set[key.first].emplace_back(key.second, mean);

    ScalingReport report;
    report.reference = ref_label;

    const auto ref_it = per_set.find(ref_label);
    for (const auto& [label, series] : per_set) {
        if (label == ref_label) continue;
        ScalingRow row;
        row.parameter_set = label;
        for (const auto& [width, mean] : series) {
            if (ref_it == per_set.end())
                throw InputError("scaling reference " + ref_label +
                                 " has no records");
            const auto& ref_series = ref_it->second;
            const auto rit = std::find_if(
                ref_series.begin(), ref_series.end(),
                [width = width](const auto& p) { return p.first == width; });
            if (rit == ref_series.end())
                throw InputError("scaling reference " + ref_label +
                                 " is missing width " + format_double(width));
            row.ratios.push_back(mean / rit->second);
        }
        double sum = 0.0;
        for (double r : row.ratios) sum += r;
        row.mean_ratio = sum / static_cast<double>(row.ratios.size());
        if (row.ratios.size() > 1) {
            double ss = 0.0;
            for (double r : row.ratios)
                ss += (r - row.mean_ratio) * (r - row.mean_ratio);
            const double sd =
                std::sqrt(ss / static_cast<double>(row.ratios.size() - 1));
            row.cv = sd / row.mean_ratio;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<ExperimentRow> parse_experiments_csv(std::istream& is) {
    std::string line;
    int line_no = 0;

    if (!std::getline(is, line))
        throw InputError("experiments CSV is empty (missing header)");
    ++line_no;
    if (line != kExperimentsHeader)
        throw InputError("experiments CSV header mismatch on line 1: got '" +
                         line + "'");

    std::vector<ExperimentRow> rows;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 4)
            throw InputError("expected 4 fields on line " +
                             std::to_string(line_no) + ", got " +
                             std::to_string(f.size()));
        ExperimentRow r;
        r.source = std::string(f[0]);
        r.width_m = parse_double(f[1], "width_m", line_no);
        r.n_participants =
            static_cast<int>(parse_int(f[2], "n_participants", line_no));
        r.total_time_s = parse_double(f[3], "total_time_s", line_no);
        if (r.n_participants < 2)
            throw InputError("n_participants must be >= 2 on line " +
                             std::to_string(line_no));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ComparisonRow> compare_with_experiments(
    std::span<const AggregateRow> summary,
    std::span<const ExperimentRow> experiments, const std::string& set_label) {
    std::map<double, std::vector<double>> scaled_by_width;
    for (const ExperimentRow& e : experiments)
        scaled_by_width[e.width_m].push_back(
            scale_total_time(e.total_time_s, e.n_participants));

    std::vector<ComparisonRow> rows;
    for (const auto& [width, scaled] : scaled_by_width) {
        ComparisonRow row;
        row.width_m = width;
        row.n_experiments = static_cast<int>(scaled.size());
        row.exp_min_scaled_s = *std::min_element(scaled.begin(), scaled.end());
        row.exp_max_scaled_s = *std::max_element(scaled.begin(), scaled.end());
        for (const AggregateRow& s : summary) {
            if (s.parameter_set == set_label &&
                std::abs(s.width_m - width) < 1e-9) {
                row.has_simulation = true;
                row.sim_mean_total_time_s = s.mean_total_time_s;
                row.inside = row.sim_mean_total_time_s >= row.exp_min_scaled_s &&
                             row.sim_mean_total_time_s <= row.exp_max_scaled_s;
                break;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<FlowRecord> rederive_flux(std::span<const FlowRecord> records,
                                      FluxDef def) {
    std::vector<FlowRecord> out(records.begin(), records.end());
    for (FlowRecord& r : out) {
        if (!r.completed) continue;
        r.flux_per_s = def == FluxDef::Gaps
                           ? flux(r.n_pedestrians, r.total_time_s)
                           : flux_n_over_t(r.n_pedestrians, r.total_time_s);
        r.specific_flux_per_m_s = specific_flux(r.flux_per_s, r.width_m);
    }
    return out;
}

std::string analysis_report(std::span<const FlowRecord> records,
                            std::span<const AggregateRow> summary,
                            const AnalysisOptions& opts) {
    std::ostringstream os;
    os << "flux definition: " << to_string(opts.flux_def) << "\n";

    // incomplete runs
    std::map<std::string, int> incomplete;
    std::set<std::string> labels;
    for (const FlowRecord& r : records) {
        labels.insert(r.parameter_set);
        if (!r.completed) incomplete[r.parameter_set] += 1;
    }
    int total_incomplete = 0;
    for (const auto& [label, count] : incomplete) total_incomplete += count;
    if (total_incomplete > 0) {
        os << "warning: " << total_incomplete
           << " incomplete run(s) excluded from aggregation:";
        for (const auto& [label, count] : incomplete)
            os << ' ' << label << "=" << count;
        os << "\n";
    } else {
        os << "all runs completed\n";
    }
    os << "\n";

    // per set: linear fit of mean flux vs width, specific-flux minimum
    for (const std::string& label : labels) {
        std::vector<std::pair<double, double>> flux_points, specific_points;
        for (const AggregateRow& row : summary) {
            if (row.parameter_set != label) continue;
            flux_points.emplace_back(row.width_m, row.mean_flux_per_s);
            specific_points.emplace_back(row.width_m,
                                         row.mean_specific_flux_per_m_s);
        }
        os << "[" << label << "]\n";
        if (flux_points.size() >= 2) {
            try {
                const LinearFit fit = linear_fit(flux_points);
                os << "  flux vs width fit: slope=" << format_double(fit.slope)
                   << " 1/(m*s), intercept=" << format_double(fit.intercept)
                   << " 1/s, r2=" << format_double(fit.r_squared) << "\n";
            } catch (const InputError& e) {
                os << "  flux vs width fit: n/a (" << e.what() << ")\n";
            }
        } else {
            os << "  flux vs width fit: n/a (needs >= 2 widths)\n";
        }
        if (specific_points.size() >= 3) {
            const auto min_width = specific_flux_minimum(specific_points);
            os << "  specific-flux minimum: "
               << (min_width ? format_double(*min_width) + " m" : "none") << "\n";
        } else {
            os << "  specific-flux minimum: n/a (needs >= 3 widths)\n";
        }
    }
    os << "\n";

    // scaling vs the reference set
    const std::string ref = opts.compare_set;
    if (labels.count(ref)) {
        try {
            const ScalingReport scaling =
                scaling_report(records, parameter_set_from_string(ref));
            os << "flux scaling vs " << ref << ":\n";
            for (const ScalingRow& row : scaling.rows) {
                os << "  " << row.parameter_set
                   << ": mean ratio=" << format_double(row.mean_ratio)
                   << ", cv=" << format_double(row.cv) << "\n";
            }
        } catch (const InputError& e) {
            os << "flux scaling vs " << ref << ": n/a (" << e.what() << ")\n";
        }
    } else {
        os << "flux scaling vs " << ref << ": n/a (" << ref
           << " not in results)\n";
    }

    // experiment comparison
    if (opts.experiments) {
        os << "\n";
        if (opts.experiments->empty()) {
            os << "warning: experiments file has no rows; comparison table is "
                  "empty\n";
        } else {
            const auto table =
                compare_with_experiments(summary, *opts.experiments, ref);
            os << "comparison with experiments (" << ref
               << " mean total vs totals scaled to 100 participants):\n";
            for (const ComparisonRow& row : table) {
                os << "  width " << format_double(row.width_m) << " m: exp ["
                   << format_double(row.exp_min_scaled_s) << ", "
                   << format_double(row.exp_max_scaled_s) << "] s ("
                   << row.n_experiments << " runs), sim ";
                if (row.has_simulation)
                    os << format_double(row.sim_mean_total_time_s) << " s -> "
                       << (row.inside ? "inside" : "outside") << "\n";
                else
                    os << "n/a (width not simulated)\n";
            }
        }
    }
    return os.str();
}

}  // namespace pedsim
