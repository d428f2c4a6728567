#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringdown/prony.hpp"
#include "ringdown/signal.hpp"

namespace ringdown {

/// Per-channel phasors of one mode, scaled so the largest magnitude is 1 and
/// rotated so the reference channel sits at zero angle.
struct ModeShape {
    std::complex<double> lambda;
    std::vector<std::string> channels;
    std::vector<std::complex<double>> phasors;
    std::string reference;
};

struct MultiChannelFit {
    std::vector<std::string> channels;
    Eigen::MatrixXcd contributions;          // rows = channels, cols = modes
    std::vector<std::string> channel_error;  // empty string = channel solved fine
};

/// One contribution solve per channel against the same eigenvalue list. A
/// channel that fails to solve is reported in channel_error; the others are
/// still returned.
MultiChannelFit multichannel_fit(const Signal& signal, const std::vector<std::string>& channels,
                                 const std::vector<std::complex<double>>& eigenvalues,
                                 const Interval& segment);

/// Normalize one cross-channel column of contribution factors into a shape.
/// The reference defaults to the largest-magnitude channel.
ModeShape normalize_shape(const std::vector<std::string>& channels,
                          const Eigen::VectorXcd& column, std::complex<double> lambda,
                          const std::string& reference = "");

enum class CombineScale {
    joint,  // renormalize target + synthetic phasor together
    append, // keep the target normalization, just append the synthetic phasor
};

struct AugmentedShape {
    ModeShape augmented; // target shape plus one synthetic summed-resonance phasor
    ModeShape resonance; // the resonance phasors as a standalone shape
};

/// Fold the per-channel resonance-mode phasors into the shape of the natural
/// mode they detune against: their sum joins the shape as one extra phasor.
AugmentedShape combine_resonance_contribution(const ModeShape& target,
                                              const std::vector<std::complex<double>>& resonance,
                                              std::complex<double> resonance_lambda,
                                              double eps_freq_hz = 0.1,
                                              CombineScale policy = CombineScale::joint);

} // namespace ringdown
