#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ringdown {

struct Interval {
    double start = 0.0;
    double end = 0.0;
    double length() const { return end - start; }
};

/// Uniformly sampled, multi-channel real waveform. All channels share the
/// grid t_k = t0 + k*dt and have identical length >= 2. Immutable after
/// construction; safe to share between threads.
class Signal {
public:
    Signal(double t0, double dt, std::vector<std::string> names,
           std::vector<std::vector<double>> channels);

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    std::size_t size() const { return channels_.empty() ? 0 : channels_[0].size(); }
    std::size_t channel_count() const { return channels_.size(); }
    double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
    Interval support() const { return {t0_, time(size() - 1)}; }

    const std::vector<std::string>& channel_names() const { return names_; }
    bool has_channel(const std::string& name) const;
    const std::vector<double>& channel(const std::string& name) const; // UnknownChannel
    const std::vector<double>& channel(std::size_t idx) const { return channels_[idx]; }

    /// Inclusive sample index range [first, last] covering `iv`; with
    /// include_end=false a sample landing exactly on iv.end is dropped so
    /// adjacent segments do not share samples.
    std::pair<std::size_t, std::size_t> sample_range(const Interval& iv,
                                                     bool include_end = true) const;

    std::vector<double> slice(const std::string& name, const Interval& iv,
                              bool include_end = true) const;

    /// Time of the first sample inside `iv` (the fit anchor for that window).
    double window_start_time(const Interval& iv) const;

private:
    double t0_ = 0.0;
    double dt_ = 1.0;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> channels_;
};

} // namespace ringdown
