#pragma once

#include <stdexcept>
#include <string>

namespace plateau {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateSeminorm : Error {
    explicit DegenerateSeminorm(const std::string& msg = "degenerate seminorm") : Error(msg) {}
};

struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg = "iteration did not converge") : Error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg = "point outside coordinate domain") : Error(msg) {}
};

struct ChartStraddle : Error {
    explicit ChartStraddle(const std::string& msg = "triangle image spans several charts") : Error(msg) {}
};

struct InfeasibleBoundary : Error {
    explicit InfeasibleBoundary(const std::string& msg = "boundary curve is not a Jordan polyline") : Error(msg) {}
};

struct NonDecrease : Error {
    explicit NonDecrease(const std::string& msg = "line search failed to decrease the objective") : Error(msg) {}
};

struct DeformationDegenerate : Error {
    explicit DeformationDegenerate(const std::string& msg = "deformation parameters degenerate") : Error(msg) {}
};

struct ZeroLength : Error {
    explicit ZeroLength(const std::string& msg = "curve has zero length") : Error(msg) {}
};

struct ParameterOutOfWindow : Error {
    explicit ParameterOutOfWindow(const std::string& msg = "parameter outside admissible window") : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg = "invalid configuration") : Error(msg) {}
};

struct InsufficientSamples : Error {
    explicit InsufficientSamples(const std::string& msg = "not enough samples") : Error(msg) {}
};

}  // namespace plateau
