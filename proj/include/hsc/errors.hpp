#pragma once

#include <stdexcept>
#include <string>

namespace hsc {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// scenario / configuration
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };

// numeric preconditions
struct ZeroInertia : Error { using Error::Error; };
struct NoStiffness : Error { using Error::Error; };
struct NonFiniteState : Error { using Error::Error; };
struct SingularDiscretization : Error { using Error::Error; };
struct DegenerateBeta : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };

// shapes and sequencing
struct ShapeMismatch : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct HorizonZero : Error { using Error::Error; };
struct HistoryMissing : Error { using Error::Error; };
struct EmptyLog : Error { using Error::Error; };
struct TimingMismatch : Error { using Error::Error; };

/// Runtime failure inside a simulation run; carries the control step index.
struct SimulationError : Error {
    SimulationError(std::size_t step, const std::string& what)
        : Error("step " + std::to_string(step) + ": " + what), step(step) {}
    std::size_t step;
};

}  // namespace hsc
