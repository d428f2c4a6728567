#pragma once

#include <string>
#include <vector>

#include "ringdown/signal.hpp"

namespace ringdown {

/// Rectified-peak amplitude envelope sampled on the source window's grid.
struct Envelope {
    std::vector<double> times;
    std::vector<double> amplitudes;
};

/// Piecewise-linear interpolation through the local maxima of |samples|,
/// with the window endpoints kept as knots.
Envelope envelope(const Signal& signal, const std::string& channel, const Interval& window);

} // namespace ringdown
