// pedsim: deterministic social-force bottleneck simulator and sweep harness.
//
// Subcommands:
//   params   print a built-in parameter set as key=value lines
//   run      simulate one (set, width, seed) cell
//   sweep    run the full (sets x widths x replications) matrix
//   analyze  aggregate results.csv, fit flux vs width, report minima/scaling
//
// Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 simulation
// error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pedsim/csv.hpp"
#include "pedsim/engine.hpp"
#include "pedsim/errors.hpp"
#include "pedsim/measurement.hpp"
#include "pedsim/sweep.hpp"

namespace {

using namespace pedsim;

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // '\n' line endings everywhere
    if (!os) throw InputError("cannot open '" + path + "' for writing");
    return os;
}

void add_geometry_flags(CLI::App* cmd, GeometryConfig& geo) {
    cmd->add_option("--corridor-halfwidth", geo.corridor_halfwidth,
                    "Corridor half width in m");
    cmd->add_option("--bottleneck-depth", geo.bottleneck_depth,
                    "Bottleneck depth in m");
    cmd->add_option("--front-distance", geo.front_distance,
                    "Spawn front edge to bottleneck entrance in m");
    cmd->add_option("--spawn-width", geo.spawn_width, "Spawn region width in m");
    cmd->add_option("--spawn-density", geo.spawn_density,
                    "Initial density in 1/m^2");
    cmd->add_option("--removal-offset", geo.removal_offset,
                    "Removal line distance past the measurement line in m");
}

int cmd_params(const std::string& set_name) {
    const ModelParams p = builtin_parameter_set(parameter_set_from_string(set_name));
    std::cout << format_params(p);
    return 0;
}

struct RunArgs {
    std::string set_name;
    double width = 0.0;
    std::uint64_t seed = 0;
    int n = 100;
    double dt = 0.05;
    double t_max = 600.0;
    std::string out_path;
    std::string traj_path;
    GeometryConfig geometry;
    bool check_invariants = false;
    bool serial = false;
};

int cmd_run(const RunArgs& args) {
    const ParameterSetId set = parameter_set_from_string(args.set_name);
    const ModelParams params = builtin_parameter_set(set);
    const Scenario scenario =
        build_bottleneck_scenario(args.width, args.geometry, args.n);
    if (!passable(scenario, params.radius))
        std::cerr << "warning: width " << format_double(args.width)
                  << " m is narrower than a body diameter; the bottleneck is "
                     "not passable\n";

    RunOptions opts;
    opts.dt = args.dt;
    opts.t_max = args.t_max;
    opts.mode = args.serial ? ExecMode::Serial : ExecMode::Parallel;
    opts.check_invariants = args.check_invariants;

    std::ofstream traj;
    if (!args.traj_path.empty()) {
        traj = open_output(args.traj_path);
        traj << kTrajectoryHeader << '\n';
        opts.on_step = [&traj](double t, std::span<const PedestrianState> peds) {
            for (const PedestrianState& pd : peds) {
                if (pd.exited) continue;
                traj << format_double(t) << ',' << pd.id << ','
                     << format_double(pd.position.x) << ','
                     << format_double(pd.position.y) << ','
                     << format_double(pd.velocity.x) << ','
                     << format_double(pd.velocity.y) << '\n';
            }
        };
    }

    RunResult result = run(scenario, params, args.n, args.seed, opts);
    result.parameter_set = to_string(set);

    std::cout << "completed=" << (result.completed ? "yes" : "no") << '\n';
    if (result.completed) {
        const double t = total_time(result);
        std::cout << "total_time_s=" << format_double(t) << '\n';
        if (args.n >= 2) {
            const double j = flux(args.n, t);
            std::cout << "flux_per_s=" << format_double(j) << '\n'
                      << "specific_flux_per_m_s="
                      << format_double(specific_flux(j, args.width)) << '\n';
        }
    } else {
        std::cout << "passed=" << result.passage_times.size() << "/" << args.n
                  << " (t_max reached)\n";
    }
    std::cout << "wall_clock_s=" << format_double(result.wall_clock_s) << '\n';
    if (args.check_invariants)
        std::cout << "invariant_violations=" << result.invariant_violations
                  << '\n';

    if (!args.out_path.empty()) {
        FlowRecord rec;
        rec.parameter_set = result.parameter_set;
        rec.width_m = result.width;
        rec.replication = 0;
        rec.seed = result.seed;
        rec.n_pedestrians = result.n_pedestrians;
        rec.completed = result.completed;
        if (result.completed) {
            rec.total_time_s = total_time(result);
            rec.flux_per_s = flux(args.n, rec.total_time_s);
            rec.specific_flux_per_m_s =
                specific_flux(rec.flux_per_s, result.width);
        } else {
            rec.total_time_s = rec.flux_per_s = rec.specific_flux_per_m_s =
                std::numeric_limits<double>::quiet_NaN();
        }
        auto os = open_output(args.out_path);
        write_results_csv(os, {&rec, 1});
    }
    return 0;
}

struct SweepArgs {
    std::vector<std::string> set_names;
    SweepConfig cfg;
    std::string out_path;
};

int cmd_sweep(SweepArgs& args) {
    if (!args.set_names.empty()) {
        args.cfg.sets.clear();
        for (const std::string& name : args.set_names)
            args.cfg.sets.push_back(parameter_set_from_string(name));
    }
    validate(args.cfg);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<FlowRecord> records = run_matrix(args.cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    {
        auto os = open_output(args.out_path);
        write_results_csv(os, records);
    }

    int incomplete = 0;
    std::int64_t violations = 0;
    for (const FlowRecord& r : records) {
        if (!r.completed) ++incomplete;
        violations += r.invariant_violations;
    }

    std::cout << records.size() << " runs, " << incomplete
              << " incomplete, wall " << format_double(wall) << " s -> "
              << args.out_path << '\n';
    if (args.cfg.check_invariants)
        std::cout << "invariant violations: " << violations << '\n';
    if (incomplete > 0)
        std::cerr << "warning: " << incomplete
                  << " run(s) hit t_max before everyone passed; flagged in the "
                     "results\n";
    return 0;
}

struct AnalyzeArgs {
    std::string results_path;
    std::string summary_path;
    std::string report_path;
    std::string flux_def = "gaps";
    std::string experiments_path;
    std::string compare_set = "P0";
};

int cmd_analyze(const AnalyzeArgs& args) {
    std::ifstream is(args.results_path, std::ios::binary);
    if (!is) throw InputError("cannot open '" + args.results_path + "'");
    const std::vector<FlowRecord> raw = read_results_csv(is);
    if (raw.empty()) throw InputError("results file has no records");

    AnalysisOptions opts;
    opts.flux_def = flux_def_from_string(args.flux_def);
    opts.compare_set = args.compare_set;
    if (!args.experiments_path.empty()) {
        std::ifstream es(args.experiments_path, std::ios::binary);
        if (!es) throw InputError("cannot open '" + args.experiments_path + "'");
        opts.experiments = parse_experiments_csv(es);
    }

    const std::vector<FlowRecord> records = rederive_flux(raw, opts.flux_def);
    const std::vector<AggregateRow> summary = aggregate(records);
    {
        auto os = open_output(args.summary_path);
        write_summary_csv(os, summary);
    }

    const std::string report = analysis_report(records, summary, opts);
    if (!args.report_path.empty()) {
        auto os = open_output(args.report_path);
        os << report;
        std::cout << "summary -> " << args.summary_path << ", report -> "
                  << args.report_path << '\n';
    } else {
        std::cout << report;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic social-force bottleneck simulator"};
    app.require_subcommand(1);

    std::string params_set = "P0";
    CLI::App* params_cmd =
        app.add_subcommand("params", "Print a built-in parameter set");
    params_cmd->add_option("--set", params_set, "Parameter set id (P0..P7)")
        ->required();

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand("run", "Simulate a single run");
    run_cmd->add_option("--set", run_args.set_name, "Parameter set id (P0..P7)")
        ->required();
    run_cmd->add_option("--width", run_args.width, "Bottleneck width in m")
        ->required();
    run_cmd->add_option("--seed", run_args.seed, "RNG seed")->required();
    run_cmd->add_option("--n", run_args.n, "Number of pedestrians");
    run_cmd->add_option("--dt", run_args.dt, "Time step in s");
    run_cmd->add_option("--t-max", run_args.t_max, "Give-up time in s");
    run_cmd->add_option("--out", run_args.out_path, "Write a one-row results CSV");
    run_cmd->add_option("--traj", run_args.traj_path, "Write a trajectory CSV");
    run_cmd->add_flag("--check-invariants", run_args.check_invariants,
                      "Verify physical invariants every step");
    run_cmd->add_flag("--serial", run_args.serial,
                      "Use the serial reference force pass");
    add_geometry_flags(run_cmd, run_args.geometry);

    SweepArgs sweep_args;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Run the parameter-set x width matrix");
    sweep_cmd->add_option("--sets", sweep_args.set_names,
                          "Parameter sets (default P0..P7)")
        ->delimiter(',');
    sweep_cmd->add_option("--widths", sweep_args.cfg.widths,
                          "Bottleneck widths in m (default 0.4,0.5,0.6,0.7,0.8,1.0)")
        ->delimiter(',');
    sweep_cmd->add_option("--reps", sweep_args.cfg.replications,
                          "Replications per cell");
    sweep_cmd->add_option("--base-seed", sweep_args.cfg.base_seed, "Seed base");
    sweep_cmd->add_option("--jobs", sweep_args.cfg.jobs,
                          "Parallel workers (0 = hardware default)");
    sweep_cmd->add_option("--n", sweep_args.cfg.n_pedestrians,
                          "Pedestrians per run");
    sweep_cmd->add_option("--dt", sweep_args.cfg.dt, "Time step in s");
    sweep_cmd->add_option("--t-max", sweep_args.cfg.t_max, "Give-up time in s");
    sweep_cmd->add_option("--out", sweep_args.out_path, "Results CSV path")
        ->required();
    sweep_cmd->add_flag("--check-invariants", sweep_args.cfg.check_invariants,
                        "Verify physical invariants every step");
    add_geometry_flags(sweep_cmd, sweep_args.cfg.geometry);

    AnalyzeArgs analyze_args;
    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "Aggregate and report on sweep results");
    analyze_cmd
        ->add_option("--results", analyze_args.results_path, "results.csv path")
        ->required();
    analyze_cmd
        ->add_option("--summary", analyze_args.summary_path, "summary.csv path")
        ->required();
    analyze_cmd->add_option("--report", analyze_args.report_path,
                            "Report text path (default: stdout)");
    analyze_cmd->add_option("--flux-def", analyze_args.flux_def,
                            "Flux definition: gaps | n_over_t");
    analyze_cmd->add_option("--experiments", analyze_args.experiments_path,
                            "Experimental totals CSV for comparison");
    analyze_cmd->add_option("--compare-set", analyze_args.compare_set,
                            "Set compared against experiments (default P0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // help text, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (params_cmd->parsed()) return cmd_params(params_set);
        if (run_cmd->parsed()) return cmd_run(run_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
        if (analyze_cmd->parsed()) return cmd_analyze(analyze_args);
        return 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
