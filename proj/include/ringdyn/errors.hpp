#pragma once

#include <stdexcept>
#include <string>

namespace ringdyn {

// Error taxonomy. Everything thrown by the library derives from Error.
// Validation covers malformed inputs (bad configs, bad parameters);
// the remaining classes are numerical/structural failures detected at runtime.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
    // Optional JSON-ish field path ("$.law.kind") for config diagnostics.
    std::string field;
    explicit ValidationError(const std::string& msg, std::string field_path = "")
        : Error(msg), field(std::move(field_path)) {}
};

struct DomainError : Error {
    using Error::Error;
};

struct ExtrapolationError : Error {
    using Error::Error;
};

struct CollisionError : Error {
    using Error::Error;
};

struct SingularConfigError : Error {
    using Error::Error;
};

struct StiffnessError : Error {
    using Error::Error;
};

struct GeometryError : Error {
    using Error::Error;
};

struct NotARingError : Error {
    using Error::Error;
};

struct TrackingError : Error {
    using Error::Error;
};

struct InfeasibleProfileError : Error {
    using Error::Error;
};

struct SolverError : Error {
    using Error::Error;
};

}  // namespace ringdyn
