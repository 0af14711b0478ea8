// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace ioncav {

// Thrown when a pulse would push population past a Fock cutoff. The analytic
// propagator refuses instead of silently freezing the leaking amplitude.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by fixed-step integrators when the requested step size violates the
// norm / trace drift bound.
struct StepSizeError : std::runtime_error {
    explicit StepSizeError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ioncav
