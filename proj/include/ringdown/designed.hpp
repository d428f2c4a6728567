#pragma once

#include <optional>
#include <vector>

#include "ringdown/signal.hpp"

namespace ringdown {

struct DcTerm {
    double damping = 0.0;   // 1/s
    double amplitude = 0.0; // contribution factor B
};

struct OscillatoryTerm {
    double damping = 0.0;
    double freq_hz = 0.0;
    double amplitude = 0.0; // B of one member of the conjugate pair
    double phase_rad = 0.0;
};

/// Oscillatory term whose instantaneous frequency follows a
/// frequency-amplitude law: f(A) = f_max - (f_max - f_min) * clamp(A,0,1)^exponent,
/// with A(t) = exp(damping * t) starting from unit amplitude.
struct DriftTerm {
    double damping = 0.0;
    double f_min_hz = 0.0;
    double f_max_hz = 0.0;
    double amplitude = 0.0;
    double exponent = 2.0;
    double phase_rad = 0.0;
};

struct DesignedSignalSpec {
    DcTerm dc;
    std::vector<OscillatoryTerm> oscillatory;
    std::optional<DriftTerm> drift;
};

/// Built-in near-resonant test signal: a dc mode, two oscillatory modes at
/// 0.540 and 1.095 Hz, and a drifting mode sweeping 1.430 -> 1.670 Hz whose
/// band straddles 0.540 + 1.095 = 1.635 Hz. All contribution factors 0.5.
DesignedSignalSpec near_resonant_demo_spec();

/// Synthesize the single-channel signal on t = 0..t_end step dt. Each
/// oscillatory term contributes 2*B*exp(a*t)*cos(2*pi*f*t + phase); the drift
/// term's phase is the trapezoid-integrated instantaneous frequency.
Signal generate_designed(const DesignedSignalSpec& spec, double t_end, double dt);

/// Frequency of the drift term at a given oscillation amplitude.
double instantaneous_fa_frequency(const DesignedSignalSpec& spec, double amplitude);

} // namespace ringdown
