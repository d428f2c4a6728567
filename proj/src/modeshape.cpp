#include "ringdown/modeshape.hpp"

#include <cmath>
#include <numbers>

#include "ringdown/errors.hpp"

namespace ringdown {

MultiChannelFit multichannel_fit(const Signal& signal, const std::vector<std::string>& channels,
                                 const std::vector<std::complex<double>>& eigenvalues,
                                 const Interval& segment) {
    MultiChannelFit out;
    out.channels = channels;
    out.contributions.setZero(static_cast<Eigen::Index>(channels.size()),
                              static_cast<Eigen::Index>(eigenvalues.size()));
    out.channel_error.assign(channels.size(), "");
    const double t_start = signal.window_start_time(segment);
    for (std::size_t c = 0; c < channels.size(); ++c) {
        try {
            const std::vector<double> samples = signal.slice(channels[c], segment);
            const ContributionFit fit =
                solve_contributions(samples, eigenvalues, signal.dt(), t_start);
            out.contributions.row(static_cast<Eigen::Index>(c)) = fit.b.transpose();
        } catch (const std::exception& e) {
            out.channel_error[c] = e.what();
        }
    }
    return out;
}

ModeShape normalize_shape(const std::vector<std::string>& channels,
                          const Eigen::VectorXcd& column, std::complex<double> lambda,
                          const std::string& reference) {
    if (channels.size() != static_cast<std::size_t>(column.size()))
        throw ChannelMismatch("channel names and phasor column sizes differ");
    Eigen::Index imax = 0;
    const double vmax = column.cwiseAbs().maxCoeff(&imax);
    if (vmax == 0.0) throw AllZeroColumn("cannot normalize an all-zero shape column");

    std::size_t ref_idx = static_cast<std::size_t>(imax);
    if (!reference.empty()) {
        bool found = false;
        for (std::size_t c = 0; c < channels.size(); ++c)
            if (channels[c] == reference) {
                ref_idx = c;
                found = true;
            }
        if (!found) throw UnknownChannel("reference channel '" + reference + "' not present");
    }

    ModeShape shape;
    shape.lambda = lambda;
    shape.channels = channels;
    shape.reference = channels[ref_idx];
    Eigen::VectorXcd v = column / vmax;
    const std::complex<double> anchor = v[static_cast<Eigen::Index>(ref_idx)];
    if (std::abs(anchor) > 0.0) v *= std::abs(anchor) / anchor; // zero angle at the reference
    shape.phasors.assign(v.data(), v.data() + v.size());
    return shape;
}

AugmentedShape combine_resonance_contribution(const ModeShape& target,
                                              const std::vector<std::complex<double>>& resonance,
                                              std::complex<double> resonance_lambda,
                                              double eps_freq_hz, CombineScale policy) {
    if (resonance.size() != target.channels.size())
        throw ChannelMismatch("resonance phasors do not match the target channel set");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double df = std::abs(std::abs(resonance_lambda.imag()) - std::abs(target.lambda.imag())) / two_pi;
    if (df > eps_freq_hz)
        throw UsageError("resonance mode is not within the near-resonance band of the target");

    std::complex<double> synthetic(0.0, 0.0);
    for (const auto& ph : resonance) synthetic += ph;

    AugmentedShape out;
    out.augmented = target;
    out.augmented.channels.push_back("resonance_sum");
    out.augmented.phasors.push_back(synthetic);
    if (policy == CombineScale::joint) {
        double vmax = 0.0;
        for (const auto& ph : out.augmented.phasors) vmax = std::max(vmax, std::abs(ph));
        if (vmax > 0.0)
            for (auto& ph : out.augmented.phasors) ph /= vmax;
    }

    Eigen::VectorXcd rescol(static_cast<Eigen::Index>(resonance.size()));
    for (std::size_t c = 0; c < resonance.size(); ++c)
        rescol[static_cast<Eigen::Index>(c)] = resonance[c];
    if (rescol.cwiseAbs().maxCoeff() == 0.0) {
        out.resonance.lambda = resonance_lambda;
        out.resonance.channels = target.channels;
        out.resonance.phasors.assign(resonance.size(), {0.0, 0.0});
        out.resonance.reference = target.reference;
    } else {
        out.resonance = normalize_shape(target.channels, rescol, resonance_lambda);
    }
    return out;
}

} // namespace ringdown
