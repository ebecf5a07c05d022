#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace omsq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One violated invariant of a parameter record.
struct Violation {
    std::string field;
    std::string message;
    double value = 0.0;
};

struct InvalidParams : Error {
    std::vector<Violation> violations;
    explicit InvalidParams(std::vector<Violation> v)
        : Error(join(v)), violations(std::move(v)) {}
    static std::string join(const std::vector<Violation>& vs) {
        std::string s = "invalid parameters:";
        for (const auto& v : vs) s += " [" + v.field + ": " + v.message + "]";
        return s;
    }
};

struct ConfigError : Error {
    int line = 0;
    ConfigError(const std::string& msg, int line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct NoConvergence : Error {
    double last_residual = 0.0;
    NoConvergence(const std::string& msg, double residual)
        : Error(msg + " (last residual " + std::to_string(residual) + ")"),
          last_residual(residual) {}
};

struct EigenFailure : Error {
    using Error::Error;
};

struct Unstable : Error {
    double margin = 0.0;
    explicit Unstable(double m)
        : Error("model is not stable (margin " + std::to_string(m) + ")"), margin(m) {}
};

struct StepTooLarge : Error {
    using Error::Error;
};

struct NonPositiveVariance : Error {
    using Error::Error;
};

struct OracleMismatch : Error {
    using Error::Error;
};

struct UnknownPreset : Error {
    explicit UnknownPreset(const std::string& name)
        : Error("unknown preset '" + name + "'") {}
};

} // namespace omsq
