#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringdown/designed.hpp"
#include "ringdown/odes.hpp"
#include "ringdown/resonance.hpp"
#include "ringdown/signal.hpp"

namespace ringdown {

/// Everything one `analyze` run needs; file values are overridden by CLI flags.
struct AnalysisConfig {
    std::vector<std::string> channels;
    std::optional<Interval> window;
    std::optional<double> split_time;
    std::optional<double> envelope_fraction;
    int order = 7;
    ExtendedOptions extended;
    std::string report_path;
    std::string reconstruction_path;
};

AnalysisConfig load_analysis_config(const std::string& path);

/// Degree <= 2 polynomial vector field, declaratively:
/// { "n": 2, "equilibrium": [0,0],
///   "f": [ [ {"c": -1.0, "vars": [0]}, {"c": 1.0, "vars": [1,1]} ],
///          [ {"c": -2.0, "vars": [1]} ] ] }
PolynomialSystem load_polynomial_system(const std::string& path);

/// Designed-signal spec file:
/// { "dc": {"damping": -0.3, "amplitude": 0.5},
///   "oscillatory": [ {"damping": -0.1, "freq_hz": 0.5, "amplitude": 0.5, "phase_rad": 0} ],
///   "drift": {"damping": -0.33, "f_min_hz": 1.43, "f_max_hz": 1.67,
///             "amplitude": 0.5, "exponent": 2, "phase_rad": 0} }
DesignedSignalSpec load_designed_spec(const std::string& path);

} // namespace ringdown
