// Benchmarks the per-step force pass: serial reference vs the OpenMP team,
// on live crowd states of increasing size. The two passes must also agree
// bit-for-bit; the benchmark aborts if they ever diverge.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pedsim/engine.hpp"

using namespace pedsim;

namespace {

double time_steps(SimulationState state, int steps, ExecMode mode) {
    StepWorkspace ws;
    const auto t0 = std::chrono::steady_clock::now();
    for (int s = 0; s < steps; ++s) step(state, 0.05, ws, mode);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool states_identical(const SimulationState& a, const SimulationState& b) {
    for (std::size_t i = 0; i < a.pedestrians.size(); ++i) {
        const PedestrianState& pa = a.pedestrians[i];
        const PedestrianState& pb = b.pedestrians[i];
        if (std::memcmp(&pa.position, &pb.position, sizeof(Vec2)) != 0 ||
            std::memcmp(&pa.velocity, &pb.velocity, sizeof(Vec2)) != 0)
            return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int steps = 200;
    std::vector<int> sizes = {100, 400, 1600};
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--steps") == 0 && i + 1 < argc)
            steps = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--sizes") == 0 && i + 1 < argc) {
            sizes.clear();
            for (char* tok = std::strtok(argv[++i], ","); tok;
                 tok = std::strtok(nullptr, ","))
                sizes.push_back(std::atoi(tok));
        } else {
            std::fprintf(stderr, "usage: %s [--steps N] [--sizes 100,400,...]\n",
                         argv[0]);
            return 1;
        }
    }

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif
    std::printf("%8s %8s %14s %14s %9s\n", "n_peds", "steps", "serial ms/st",
                "parallel ms/st", "speedup");

    const ModelParams params = builtin_parameter_set(ParameterSetId::P0);
    for (int n : sizes) {
        const Scenario scenario = build_bottleneck_scenario(1.0, {}, n);
        SimulationState state = init_state(scenario, params, n, 1);

        // advance into a crowded mid-run state so the timing reflects real
        // neighbor density, then time both passes from identical snapshots
        StepWorkspace ws;
        for (int s = 0; s < 100; ++s) step(state, 0.05, ws);

        SimulationState check_a = state;
        SimulationState check_b = state;
        StepWorkspace wa, wb;
        for (int s = 0; s < 10; ++s) {
            step(check_a, 0.05, wa, ExecMode::Serial);
            step(check_b, 0.05, wb, ExecMode::Parallel);
        }
        if (!states_identical(check_a, check_b)) {
            std::fprintf(stderr,
                         "FAIL: serial and parallel passes diverged at n=%d\n", n);
            return 1;
        }

        const double serial_s = time_steps(state, steps, ExecMode::Serial);
        const double parallel_s = time_steps(state, steps, ExecMode::Parallel);
        std::printf("%8d %8d %14.3f %14.3f %8.2fx\n", n, steps,
                    1e3 * serial_s / steps, 1e3 * parallel_s / steps,
                    serial_s / parallel_s);
    }
    return 0;
}
