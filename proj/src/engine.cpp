#include "pedsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "pedsim/errors.hpp"

namespace pedsim {

namespace {

// Cell size for the per-step grid. 4x the isotropic force range of the
// reference parameter set keeps ring searches shallow; never below a body
// diameter so contact candidates stay within one ring.
double grid_cell_size(const ModelParams& p) {
    return std::max(0.8, 2.0 * p.radius);
}

}  // namespace

SimulationState init_state(const Scenario& scenario, const ModelParams& params,
                           int n, std::uint64_t seed) {
    SimulationState st;
    st.scenario = scenario;
    st.params = params;
    st.pedestrians = spawn_pedestrians(scenario, n, params, seed);
    return st;
}

SimulationState make_state(const Scenario& scenario, const ModelParams& params,
                           std::vector<PedestrianState> pedestrians) {
    for (std::size_t i = 0; i < pedestrians.size(); ++i)
        if (pedestrians[i].id != i)
            throw ContractError("pedestrian list must be indexed by id");
    SimulationState st;
    st.scenario = scenario;
    st.params = params;
    st.pedestrians = std::move(pedestrians);
    return st;
}

std::span<const ForceBreakdown> last_breakdowns(const StepWorkspace& ws) {
    return ws.breakdowns;
}

void step(SimulationState& st, double dt, StepWorkspace& ws, ExecMode mode) {
    if (!(dt > 0.0)) throw InputError("dt must be positive");

    const Scenario& sc = st.scenario;
    const ModelParams& p = st.params;
    std::vector<PedestrianState>& peds = st.pedestrians;
    const int n = static_cast<int>(peds.size());

    // ---- force pass against the immutable pre-step snapshot ----
    ws.grid_points.clear();
    ws.positions.resize(n);
    ws.radii.resize(n);
    for (const PedestrianState& pd : peds) {
        ws.positions[pd.id] = pd.position;
        ws.radii[pd.id] = pd.radius;
        if (!pd.exited) ws.grid_points.push_back({pd.id, pd.position});
    }
    ws.grid.build(ws.grid_points, grid_cell_size(p));

    // contact adjacency: gathered once per step so each pedestrian can sum
    // its body contacts in ascending id order (pairs arrive lexicographic)
    ws.contact_adj.resize(n);
    for (auto& adj : ws.contact_adj) adj.clear();
    for (const auto& [a, b] : overlapping_pairs(ws.grid, ws.positions, ws.radii)) {
        ws.contact_adj[a].push_back(b);
        ws.contact_adj[b].push_back(a);
    }

    ws.breakdowns.assign(n, ForceBreakdown{});

    const bool parallel = mode == ExecMode::Parallel;
#pragma omp parallel if (parallel)
    {
        std::vector<std::uint32_t> social;
#pragma omp for schedule(static)
        for (int i = 0; i < n; ++i) {
            const PedestrianState& pd = peds[i];
            if (pd.exited) continue;
            const Vec2 e_des = desired_direction(pd, sc);
            ws.grid.nearest_k(pd.position, p.neighbor_limit, pd.id, social);
            std::sort(social.begin(), social.end());  // sum in ascending id order
            ws.breakdowns[i] = assemble_forces(pd, e_des, peds, social,
                                               ws.contact_adj[i], sc.walls, p);
        }
    }

    // ---- serial integration in ascending id order ----
    const double t_prev = st.time;
    st.step_count += 1;
    st.time = static_cast<double>(st.step_count) * dt;

    for (int i = 0; i < n; ++i) {
        PedestrianState& pd = peds[i];
        if (pd.exited) continue;

        const Vec2 a = ws.breakdowns[i].total;
        if (!a.finite())
            throw SimulationError("integration diverged: non-finite force on "
                                  "pedestrian " +
                                  std::to_string(pd.id) + " at step " +
                                  std::to_string(st.step_count));

        Vec2 v = pd.velocity + a * dt;
        const double v_max = p.v_max_factor * pd.desired_speed;
        const double v2 = v.norm2();
        if (v2 > v_max * v_max) v = v * (v_max / std::sqrt(v2));

        const Vec2 x_old = pd.position;
        const Vec2 x_new = x_old + v * dt;
        pd.velocity = v;
        pd.position = x_new;

        if (!pd.passage_time && x_old.x < sc.measurement_line &&
            x_new.x >= sc.measurement_line) {
            pd.passage_time = t_prev + dt * (sc.measurement_line - x_old.x) /
                                           (x_new.x - x_old.x);
        }
        if (x_new.x >= sc.removal_line) pd.exited = true;
    }
}

void step(SimulationState& st, double dt) {
    StepWorkspace ws;
    step(st, dt, ws);
}

std::vector<std::string> step_invariant_violations(const SimulationState& st,
                                                   int expected_n) {
    const ModelParams& p = st.params;
    std::vector<std::string> out;
    int counted = 0;

    for (const PedestrianState& pd : st.pedestrians) {
        ++counted;

        if (pd.exited && !pd.passage_time)
            out.push_back("pedestrian " + std::to_string(pd.id) +
                          " exited without a passage time");

        const double v_max = p.v_max_factor * pd.desired_speed;
        if (pd.velocity.norm2() > v_max * v_max * (1.0 + 1e-9))
            out.push_back("pedestrian " + std::to_string(pd.id) +
                          " exceeds the speed clamp at step " +
                          std::to_string(st.step_count));

        if (pd.exited) continue;
        for (const Rect& solid : st.scenario.solid_regions) {
            const double depth = solid.interior_depth(pd.position);
            if (depth > 0.5 * pd.radius)
                out.push_back("pedestrian " + std::to_string(pd.id) +
                              " penetrated a wall by " + std::to_string(depth) +
                              " m at step " + std::to_string(st.step_count));
        }
    }

    if (counted != expected_n)
        out.push_back("pedestrian count changed (" + std::to_string(counted) +
                      " != " + std::to_string(expected_n) + ")");
    return out;
}

void check_step_invariants(const SimulationState& st, int expected_n) {
    const auto violations = step_invariant_violations(st, expected_n);
    if (!violations.empty())
        throw SimulationError("invariant violated: " + violations.front());
}

RunResult run(const Scenario& scenario, const ModelParams& params, int n,
              std::uint64_t seed, const RunOptions& opts) {
    if (!(opts.dt > 0.0)) throw InputError("dt must be positive");
    if (!(opts.t_max > 0.0)) throw InputError("t_max must be positive");

    const auto t0 = std::chrono::steady_clock::now();

    SimulationState st = init_state(scenario, params, n, seed);
    StepWorkspace ws;

    if (opts.on_step) opts.on_step(0.0, st.pedestrians);

    auto count_passed = [&st] {
        int c = 0;
        for (const PedestrianState& pd : st.pedestrians)
            if (pd.passage_time) ++c;
        return c;
    };

    std::int64_t violations = 0;
    int passed = 0;
    while (passed < n && st.time < opts.t_max) {
        step(st, opts.dt, ws, opts.mode);
        if (opts.check_invariants)
            violations += static_cast<std::int64_t>(
                step_invariant_violations(st, n).size());
        if (opts.on_step) opts.on_step(st.time, st.pedestrians);
        passed = count_passed();
    }

    RunResult r;
    r.invariant_violations = violations;
    r.width = scenario.width;
    r.seed = seed;
    r.n_pedestrians = n;
    r.passage_times.reserve(passed);
    for (const PedestrianState& pd : st.pedestrians)
        if (pd.passage_time) r.passage_times.push_back(*pd.passage_time);
    std::sort(r.passage_times.begin(), r.passage_times.end());
    r.completed = passed == n;
    r.wall_clock_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return r;
}

}  // namespace pedsim
