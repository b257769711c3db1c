#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace slglue {

// Error families map onto the CLI exit codes:
//   ConfigError -> 2, NumericError -> 3, GeometryError -> 4.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of refinement budget. Carries the best value
// accumulated so far together with its error estimate.
struct QuadratureError : NumericError {
    double partial_value;
    double error_estimate;
    QuadratureError(const std::string& msg, double partial, double estimate)
        : NumericError(msg), partial_value(partial), error_estimate(estimate) {}
};

struct SingularJacobianError : NumericError {
    using NumericError::NumericError;
};

struct NonConvergenceError : NumericError {
    std::vector<double> last_iterate;
    double last_residual;
    NonConvergenceError(const std::string& msg, std::vector<double> iterate, double residual)
        : NumericError(msg), last_iterate(std::move(iterate)), last_residual(residual) {}
};

struct OdeBlowupError : NumericError {
    double t_reached;
    OdeBlowupError(const std::string& msg, double t)
        : NumericError(msg), t_reached(t) {}
};

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A neck end stops being a graph over its asymptotic plane at the requested
// radius. Suggests retrying with a larger inner radius.
struct GraphicalityError : GeometryError {
    using GeometryError::GeometryError;
};

struct LatticeError : GeometryError {
    using GeometryError::GeometryError;
};

// The matching system for per-component constants has no solution.
struct ObstructionError : GeometryError {
    using GeometryError::GeometryError;
};

}  // namespace slglue
