#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace moller {

/// Base class for all engine errors. Carries the module name so the CLI
/// can report which stage of the pipeline failed.
class EngineError : public std::runtime_error {
public:
    EngineError(std::string module, const std::string& msg)
        : std::runtime_error("[" + module + "] " + msg), module_(std::move(module)) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Invalid or inconsistent configuration (exit code 2 at the CLI).
class ConfigError : public EngineError {
public:
    using EngineError::EngineError;
};

/// Numerical / geometry failures during a run (exit code 3 at the CLI).
class NumericalError : public EngineError {
public:
    using EngineError::EngineError;
};

/// A wavefunction was used in the wrong representation (position vs momentum).
class RepresentationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Packet support or grid geometry violated.
class GeometryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Probability mass reached the edge of the (periodic) grid. Silent
/// wraparound would corrupt every downstream observable, so this is fatal.
class BoundaryBreachError : public NumericalError {
public:
    BoundaryBreachError(std::string module, double t, double edge_prob)
        : NumericalError(std::move(module),
              "wavepacket reached the grid boundary at t=" + std::to_string(t) +
                  " (edge-band probability " + std::to_string(edge_prob) + ")"),
          time_of_breach(t), edge_probability(edge_prob) {}
    double time_of_breach;
    double edge_probability;
};

/// An iterative procedure failed to converge; carries the residual history.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(std::string module, const std::string& msg, std::vector<double> residuals)
        : NumericalError(std::move(module), msg), residual_trace(std::move(residuals)) {}
    std::vector<double> residual_trace;
};

} // namespace moller
