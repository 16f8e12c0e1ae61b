#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pedsim/forces.hpp"
#include "pedsim/params.hpp"
#include "pedsim/scenario.hpp"
#include "pedsim/spatial_index.hpp"

namespace pedsim {

// Serial runs the per-pedestrian force pass on one thread; Parallel uses an
// OpenMP team. Both produce bit-identical results: every pedestrian's forces
// are evaluated against the immutable pre-step snapshot and written to a slot
// indexed by id, and the integration pass is always serial in ascending id
// order.
enum class ExecMode { Serial, Parallel };

struct SimulationState {
    Scenario scenario;
    ModelParams params;
    std::vector<PedestrianState> pedestrians;  // index == id, stable for the run
    std::int64_t step_count = 0;
    double time = 0.0;  // s, always step_count * dt
};

struct RunResult {
    std::string parameter_set = "custom";
    double width = 0.0;  // m
    std::uint64_t seed = 0;
    int n_pedestrians = 0;
    std::vector<double> passage_times;  // s, ascending; length == n iff completed
    bool completed = false;
    double wall_clock_s = 0.0;
    // total per-step violations seen when RunOptions.check_invariants is on
    std::int64_t invariant_violations = 0;
};

// Reusable per-step buffers (grid, contact adjacency, force slots).
struct StepWorkspace {
    UniformGrid grid;
    std::vector<GridPoint> grid_points;
    std::vector<Vec2> positions;  // indexed by id
    std::vector<double> radii;    // indexed by id
    std::vector<std::vector<std::uint32_t>> contact_adj;
    std::vector<ForceBreakdown> breakdowns;
};

struct RunOptions {
    double dt = 0.05;     // s
    double t_max = 600.0; // s
    ExecMode mode = ExecMode::Parallel;
    bool check_invariants = false;
    // Called once with the initial state (t=0) and after every step with the
    // post-step state.
    std::function<void(double t_s, std::span<const PedestrianState>)> on_step;
};

SimulationState init_state(const Scenario& scenario, const ModelParams& params,
                           int n, std::uint64_t seed);

// For tests: adopt an explicit pedestrian list (must be indexed by id).
SimulationState make_state(const Scenario& scenario, const ModelParams& params,
                           std::vector<PedestrianState> pedestrians);

// One synchronous step: forces against the pre-step snapshot, then
// semi-implicit Euler (v' = v + a*dt, speed-clamped, then x' = x + v'*dt),
// passage detection by linear interpolation, removal past the removal line.
// Throws SimulationError naming pedestrian and step on non-finite forces.
void step(SimulationState& state, double dt, StepWorkspace& ws,
          ExecMode mode = ExecMode::Parallel);
void step(SimulationState& state, double dt);

// Latest force decomposition per pedestrian id (zero for exited), as
// computed by the preceding step() with this workspace.
std::span<const ForceBreakdown> last_breakdowns(const StepWorkspace& ws);

// One message per violated physical invariant: a center deeper than
// 0.5*radius inside a solid region, speed above the clamp, broken count
// conservation, or an exited pedestrian without a passage time. Empty on a
// clean state.
std::vector<std::string> step_invariant_violations(const SimulationState& state,
                                                   int expected_n);

// Throws SimulationError with the first violation message, if any.
void check_step_invariants(const SimulationState& state, int expected_n);

// Spawns via the scenario module and steps until all n pedestrians have
// passage times or time >= t_max (reported via completed=false, not an
// error). With check_invariants on, violations are counted into the result,
// never thrown: a crush that presses a center past the tolerance is data, not
// a reason to abort the sweep.
RunResult run(const Scenario& scenario, const ModelParams& params, int n,
              std::uint64_t seed, const RunOptions& opts = {});

}  // namespace pedsim
