#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypdim {

/// Failure categories shared by every module. The CLI maps these onto exit codes.
enum class ErrorCode {
    NoBranch,
    IncompatibleLabel,
    ParameterOutOfRange,
    InvalidModel,
    NotMixing,
    DeltaTooLarge,
    CapExceeded,
    GridTooCoarse,
    DegenerateCurve,
    DegenerateScales,
    NonPositiveRate,
    IncompatibleStochastics,
    Unsupported,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hypdim
