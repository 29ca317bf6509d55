#ifndef NEVDIFF_ERRORS_HPP
#define NEVDIFF_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nevdiff {

// Base for all library errors. Subclasses carry enough state for callers
// to salvage partial results where the operation allows it.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
    using Error::Error;
};

// Evaluation left the representable range (e.g. exp(exp z) with huge real
// part). Distinct from hitting a pole.
struct EvaluationRangeError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    QuadratureError(const std::string& msg, double last, double gauge)
        : Error(msg), last_estimate(last), error_gauge(gauge) {}
    double last_estimate;
    double error_gauge;
};

struct EnumerationError : Error {
    enum class Kind { budget_exhausted, refinement_failed, unsupported };
    EnumerationError(const std::string& msg, Kind k) : Error(msg), kind(k) {}
    Kind kind;
};

struct ExpansionError : Error {
    using Error::Error;
};

// Raised when f(z+c) == f(z) is detected; paired counting is undefined then.
struct PeriodicFunctionError : Error {
    using Error::Error;
};

// All compared coefficients agreed up to the requested depth but periodicity
// was not established; the caller must raise the depth or declare the
// function periodic.
struct DepthExhaustedError : Error {
    explicit DepthExhaustedError(const std::string& msg, int depth_used)
        : Error(msg), depth(depth_used) {}
    int depth;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DegenerateInputError : Error {
    using Error::Error;
};

// Formal series: no trusted coefficients remain after an operation.
struct TruncationError : Error {
    using Error::Error;
};

}  // namespace nevdiff

#endif
