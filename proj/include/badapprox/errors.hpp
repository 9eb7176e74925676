#pragma once

// Error taxonomy shared across modules; the CLI maps these to exit codes.

#include "badapprox/rat.hpp"

#include <stdexcept>
#include <string>

namespace badapprox {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No usable surviving cell (root selection, degenerate windows).
struct ConstructionInfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Selection could not reach the 3/400 density target; carries the ratio reached.
struct DensityShortfallError : std::runtime_error {
    Rat achieved;
    DensityShortfallError(const std::string& msg, Rat r)
        : std::runtime_error(msg + " (achieved ratio " + rat_str(r) + ")"), achieved(std::move(r)) {}
};

// Candidate sequence ran out before the selection conditions were met.
struct DepthExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Query point outside the state's window.
struct OutOfWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A required cell exists mathematically but falls outside the working window.
struct WindowTruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace badapprox
