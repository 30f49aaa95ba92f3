#pragma once

#include <stdexcept>
#include <string>

namespace legknot {

enum class ErrorCode {
    UnpairedArrow,
    OddCuspCount,
    BadMarkMultiplicity,
    NonContiguousIds,
    SingularNotAllowed,
    IllegalMove,
    NonGenericInput,
    DegenerateSegment,
    NoRoomForKink,
    NonOrientableDetected,
    InsufficientBaseValues,
    HypothesisNotEstablished,
    BudgetZero,
    SyntaxError,
    ValidationError,
    InvalidArgument,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnpairedArrow: return "UnpairedArrow";
    case ErrorCode::OddCuspCount: return "OddCuspCount";
    case ErrorCode::BadMarkMultiplicity: return "BadMarkMultiplicity";
    case ErrorCode::NonContiguousIds: return "NonContiguousIds";
    case ErrorCode::SingularNotAllowed: return "SingularNotAllowed";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::NonGenericInput: return "NonGenericInput";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::NoRoomForKink: return "NoRoomForKink";
    case ErrorCode::NonOrientableDetected: return "NonOrientableDetected";
    case ErrorCode::InsufficientBaseValues: return "InsufficientBaseValues";
    case ErrorCode::HypothesisNotEstablished: return "HypothesisNotEstablished";
    case ErrorCode::BudgetZero: return "BudgetZero";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Domain error carrying a machine-readable code.
///
/// `detail` holds the offending id for pairing errors, the character column
/// for syntax errors and the wrapped core code for validation errors.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, long detail = 0)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code), detail_(detail) {}

    ErrorCode code() const noexcept { return code_; }
    long detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    long detail_;
};

} // namespace legknot
