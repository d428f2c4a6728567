#include "ringdown/designed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ringdown/errors.hpp"

namespace ringdown {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double fa_law(const DriftTerm& d, double amplitude) {
    const double a = std::clamp(amplitude, 0.0, 1.0);
    return d.f_max_hz - (d.f_max_hz - d.f_min_hz) * std::pow(a, d.exponent);
}
} // namespace

DesignedSignalSpec near_resonant_demo_spec() {
    DesignedSignalSpec spec;
    spec.dc = {-0.3199, 0.500};
    spec.oscillatory = {
        {-0.1433, 0.540, 0.500, 0.0},
        {-0.1869, 1.095, 0.500, 0.0},
    };
    spec.drift = DriftTerm{-0.3300, 1.430, 1.670, 0.500, 2.0, 0.0};
    return spec;
}

Signal generate_designed(const DesignedSignalSpec& spec, double t_end, double dt) {
    if (!(dt > 0.0)) throw NonPositiveStep("dt must be positive");
    if (!(t_end > dt)) throw UsageError("t_end must exceed dt");
    const double nyquist = 0.5 / dt;
    for (const auto& m : spec.oscillatory)
        if (m.freq_hz >= nyquist)
            throw NyquistViolation("oscillatory mode frequency exceeds Nyquist limit");
    if (spec.drift && spec.drift->f_max_hz >= nyquist)
        throw NyquistViolation("drift mode f_max exceeds Nyquist limit");
    if (spec.drift && !(spec.drift->f_min_hz < spec.drift->f_max_hz))
        throw UsageError("drift mode needs f_min < f_max");

    const std::size_t n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1;
    std::vector<double> x(n, 0.0);

    // drift phase is a running trapezoid integral, so it is accumulated serially
    std::vector<double> drift_phase;
    if (spec.drift) {
        const auto& d = *spec.drift;
        drift_phase.resize(n);
        drift_phase[0] = d.phase_rad;
        double f_prev = fa_law(d, 1.0);
        for (std::size_t k = 1; k < n; ++k) {
            const double f_k = fa_law(d, std::exp(d.damping * static_cast<double>(k) * dt));
            drift_phase[k] = drift_phase[k - 1] + std::numbers::pi * dt * (f_prev + f_k);
            f_prev = f_k;
        }
    }

#pragma omp parallel for schedule(static)
    for (long long kk = 0; kk < static_cast<long long>(n); ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        const double t = static_cast<double>(k) * dt;
        double v = spec.dc.amplitude * std::exp(spec.dc.damping * t);
        for (const auto& m : spec.oscillatory)
            v += 2.0 * m.amplitude * std::exp(m.damping * t) *
                 std::cos(two_pi * m.freq_hz * t + m.phase_rad);
        if (spec.drift)
            v += 2.0 * spec.drift->amplitude * std::exp(spec.drift->damping * t) *
                 std::cos(drift_phase[k]);
        x[k] = v;
    }

    return Signal(0.0, dt, {"x"}, {std::move(x)});
}

double instantaneous_fa_frequency(const DesignedSignalSpec& spec, double amplitude) {
    if (!spec.drift) throw MissingFaMode("spec has no frequency-amplitude mode");
    if (amplitude < 0.0) throw UsageError("amplitude must be non-negative");
    return fa_law(*spec.drift, amplitude);
}

} // namespace ringdown
