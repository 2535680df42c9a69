#pragma once

#include <stdexcept>
#include <string>

namespace ofdmim {

enum class ErrorCode {
    InvalidConfig,
    InvalidIndex,
    InvalidPattern,
    UnusedPattern,
    InvalidSymbol,
    InvalidInput,
    InvalidLength,
    UndefinedPapr,
    InvalidSubblock,
    InvalidTaps,
    DegenerateCase,
    InvalidCase,
    InvalidDistance,
    NonPositiveMetric,
    Io,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::InvalidIndex: return "invalid-index";
    case ErrorCode::InvalidPattern: return "invalid-pattern";
    case ErrorCode::UnusedPattern: return "unused-pattern";
    case ErrorCode::InvalidSymbol: return "invalid-symbol";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::InvalidLength: return "invalid-length";
    case ErrorCode::UndefinedPapr: return "undefined-papr";
    case ErrorCode::InvalidSubblock: return "invalid-subblock";
    case ErrorCode::InvalidTaps: return "invalid-taps";
    case ErrorCode::DegenerateCase: return "degenerate-case";
    case ErrorCode::InvalidCase: return "invalid-case";
    case ErrorCode::InvalidDistance: return "invalid-distance";
    case ErrorCode::NonPositiveMetric: return "non-positive-metric";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ofdmim
