#pragma once

#include <stdexcept>
#include <string>

namespace qumi {

enum class ErrorKind {
    NotHermitian,
    TraceNotOne,
    NotPositive,
    ParamOutOfRange,
    ZeroVector,
    InvalidDistribution,
    PreconditionViolated,
    ParseError,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::TraceNotOne: return "TraceNotOne";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::InvalidDistribution: return "InvalidDistribution";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "UnknownError";
}

/// Exception carrying a machine-readable kind; the message always starts
/// with the kind name, e.g. "NotPositive: min eigenvalue -3.1e-4".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace qumi
