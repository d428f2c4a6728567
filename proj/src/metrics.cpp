#include "ringdown/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ringdown/errors.hpp"
#include "ringdown/kernels.hpp"

namespace ringdown {

double error_index(const std::vector<double>& candidate, const std::vector<double>& reference,
                   double dt) {
    if (candidate.size() != reference.size())
        throw LengthMismatch("candidate and reference lengths differ");
    if (reference.size() < 2) throw LengthMismatch("error index needs at least 2 samples");
    const double den = kernels::trapezoid_abs(reference.data(), reference.size(), dt);
    if (den == 0.0) throw ZeroReference("reference is identically zero");
    const double num =
        kernels::trapezoid_abs_diff(candidate.data(), reference.data(), candidate.size(), dt);
    return 100.0 * num / den;
}

ErrorReport windowed_error(const std::vector<double>& candidate,
                           const std::vector<double>& reference, double t0, double dt,
                           const std::vector<Interval>& subwindows) {
    if (candidate.size() != reference.size())
        throw LengthMismatch("candidate and reference lengths differ");
    const std::size_t n = reference.size();
    if (n < 2) throw LengthMismatch("error index needs at least 2 samples");
    const double t_end = t0 + static_cast<double>(n - 1) * dt;

    ErrorReport report;
    report.window = {t0, t_end};
    report.percent = error_index(candidate, reference, dt);

    for (const auto& w : subwindows) {
        if (w.start < t0 - 1e-9 || w.end > t_end + 1e-9)
            throw UsageError("subwindow lies outside the common support");
        const long first =
            std::clamp<long>(std::lround((w.start - t0) / dt), 0, static_cast<long>(n) - 1);
        const long last =
            std::clamp<long>(std::lround((w.end - t0) / dt), 0, static_cast<long>(n) - 1);
        if (last - first + 1 < 2) throw UsageError("subwindow holds fewer than 2 samples");
        std::vector<double> c(candidate.begin() + first, candidate.begin() + last + 1);
        std::vector<double> r(reference.begin() + first, reference.begin() + last + 1);
        report.breakdown.push_back({w, error_index(c, r, dt)});
    }
    return report;
}

} // namespace ringdown
