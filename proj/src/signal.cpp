#include "ringdown/signal.hpp"

#include <algorithm>
#include <cmath>

#include "ringdown/errors.hpp"

namespace ringdown {

Signal::Signal(double t0, double dt, std::vector<std::string> names,
               std::vector<std::vector<double>> channels)
    : t0_(t0), dt_(dt), names_(std::move(names)), channels_(std::move(channels)) {
    if (!(dt_ > 0.0)) throw NonPositiveStep("sampling interval must be positive");
    if (names_.size() != channels_.size())
        throw UsageError("channel name count does not match channel count");
    if (channels_.empty()) throw UsageError("signal needs at least one channel");
    const std::size_t n = channels_[0].size();
    if (n < 2) throw UsageError("channels need at least two samples");
    for (std::size_t c = 0; c < channels_.size(); ++c) {
        if (channels_[c].size() != n)
            throw UsageError("channel '" + names_[c] + "' length differs");
        for (double v : channels_[c])
            if (!std::isfinite(v))
                throw UsageError("channel '" + names_[c] + "' contains a non-finite sample");
    }
}

bool Signal::has_channel(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& Signal::channel(const std::string& name) const {
    for (std::size_t c = 0; c < names_.size(); ++c)
        if (names_[c] == name) return channels_[c];
    throw UnknownChannel("unknown channel '" + name + "'");
}

std::pair<std::size_t, std::size_t> Signal::sample_range(const Interval& iv,
                                                         bool include_end) const {
    if (!(iv.end > iv.start)) throw EmptyWindow("window has non-positive length");
    // tolerate grid-placement roundoff of half a sample spacing scaled way down
    const double tol = 1e-9;
    double first_f = (iv.start - t0_) / dt_;
    double last_f = (iv.end - t0_) / dt_;
    long first = static_cast<long>(std::ceil(first_f - tol));
    long last = static_cast<long>(std::floor(last_f + tol));
    if (!include_end && last >= 0 && std::abs(last_f - static_cast<double>(last)) <= tol) --last;
    first = std::max(first, 0L);
    last = std::min(last, static_cast<long>(size()) - 1L);
    if (last < first) throw EmptyWindow("window contains no samples");
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

std::vector<double> Signal::slice(const std::string& name, const Interval& iv,
                                  bool include_end) const {
    const auto& data = channel(name);
    auto [first, last] = sample_range(iv, include_end);
    return std::vector<double>(data.begin() + static_cast<long>(first),
                               data.begin() + static_cast<long>(last) + 1);
}

double Signal::window_start_time(const Interval& iv) const {
    auto [first, last] = sample_range(iv, true);
    (void)last;
    return time(first);
}

} // namespace ringdown
