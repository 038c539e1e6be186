#pragma once

#include <stdexcept>
#include <string>

namespace schubart {

enum class ErrorKind {
    InvalidArgument,
    NegativeCoordinate,
    CollisionSingularity,
    TotalCollapse,
    InvalidR,
    HorizonExceeded,
    StepUnderflow,
    NoSignChange,
    BracketFailure,
    NoConvergence,
    CheckpointMismatch,
    NoSafeArc,
};

inline const char* to_string(ErrorKind k) noexcept
{
    switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NegativeCoordinate: return "NegativeCoordinate";
    case ErrorKind::CollisionSingularity: return "CollisionSingularity";
    case ErrorKind::TotalCollapse: return "TotalCollapse";
    case ErrorKind::InvalidR: return "InvalidR";
    case ErrorKind::HorizonExceeded: return "HorizonExceeded";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::CheckpointMismatch: return "CheckpointMismatch";
    case ErrorKind::NoSafeArc: return "NoSafeArc";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace schubart
