#pragma once

#include <vector>

#include "ringdown/signal.hpp"

namespace ringdown {

struct WindowError {
    Interval window;
    double percent = 0.0;
};

struct ErrorReport {
    Interval window;
    double percent = 0.0;
    std::vector<WindowError> breakdown;
};

/// Integrated-absolute-difference error in percent:
/// 100 * int |candidate - reference| dt / int |reference| dt,
/// both integrals by the composite trapezoid rule.
double error_index(const std::vector<double>& candidate, const std::vector<double>& reference,
                   double dt);

/// error_index over each subwindow plus the full common window. Both
/// sequences share the grid t0 + k*dt.
ErrorReport windowed_error(const std::vector<double>& candidate,
                           const std::vector<double>& reference, double t0, double dt,
                           const std::vector<Interval>& subwindows);

} // namespace ringdown
