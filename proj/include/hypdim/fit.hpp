#pragma once

#include <span>

namespace hypdim {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< RMS of y - (slope x + intercept)
};

/// Ordinary least squares; needs at least two distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace hypdim
