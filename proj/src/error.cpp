#include "hypdim/error.hpp"

namespace hypdim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NoBranch: return "NoBranch";
        case ErrorCode::IncompatibleLabel: return "IncompatibleLabel";
        case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::NotMixing: return "NotMixing";
        case ErrorCode::DeltaTooLarge: return "DeltaTooLarge";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::DegenerateCurve: return "DegenerateCurve";
        case ErrorCode::DegenerateScales: return "DegenerateScales";
        case ErrorCode::NonPositiveRate: return "NonPositiveRate";
        case ErrorCode::IncompatibleStochastics: return "IncompatibleStochastics";
        case ErrorCode::Unsupported: return "Unsupported";
    }
    return "Unknown";
}

}  // namespace hypdim
