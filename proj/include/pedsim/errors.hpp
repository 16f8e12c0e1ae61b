#pragma once

#include <stdexcept>

namespace pedsim {

// Bad user-facing input: malformed files, invalid CLI values, infeasible
// configurations. Maps to exit code 2 in the CLI.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A kernel was called outside its contract (non-unit direction vector,
// coincident positions, zero-length wall, ...).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// The simulation itself failed: diverged integration or a violated physical
// invariant. Maps to exit code 3 in the CLI.
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pedsim
