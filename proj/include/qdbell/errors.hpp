// errors.hpp — Error categories shared across the library and the CLI.

#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace qdbell {

// Invalid user-facing configuration (bad flag value, malformed config file,
// parameter outside its domain). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Failure of a numerical procedure (step-size underflow, quadrature that did
// not reach its tolerance). The CLI maps this to exit code 1.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}

    NumericalError(const std::string& what, double time_reached, double error_estimate)
        : std::runtime_error(what), time_reached_(time_reached), error_estimate_(error_estimate) {}

    // Time up to which the integration advanced before failing (NaN if n/a).
    double time_reached() const { return time_reached_; }
    // Achieved error estimate of a non-converged quadrature (NaN if n/a).
    double error_estimate() const { return error_estimate_; }

private:
    double time_reached_ = std::numeric_limits<double>::quiet_NaN();
    double error_estimate_ = std::numeric_limits<double>::quiet_NaN();
};

} // namespace qdbell
