#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metro_dg {

enum class ErrorKind {
    InvalidArgument,
    AllZeroInHorizon,
    MisalignedWindow,
    EmptyWindow,
    GridMismatch,
    UnitMismatch,
    IncompatibleGrids,
    ZeroLps,
    CalibrationOutOfRange,
    UnitError,
    Parse,
    Validation,
    Io,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::AllZeroInHorizon: return "AllZeroInHorizon";
        case ErrorKind::MisalignedWindow: return "MisalignedWindow";
        case ErrorKind::EmptyWindow: return "EmptyWindow";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::UnitMismatch: return "UnitMismatch";
        case ErrorKind::IncompatibleGrids: return "IncompatibleGrids";
        case ErrorKind::ZeroLps: return "ZeroLps";
        case ErrorKind::CalibrationOutOfRange: return "CalibrationOutOfRange";
        case ErrorKind::UnitError: return "UnitError";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::Validation: return "ValidationError";
        case ErrorKind::Io: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Same error with a pipeline-stage prefix.
    Error tagged(std::string_view stage) const { return Error(kind_, std::string(stage) + ": " + detail_); }

private:
    ErrorKind kind_;
    std::string detail_;
};

/// 0 success, 2 validation, 3 parse, 4 I/O.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return 3;
        case ErrorKind::Io: return 4;
        default: return 2;
    }
}

}  // namespace metro_dg
