#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ringdown/prony.hpp"
#include "ringdown/signal.hpp"

namespace ringdown {

/// How to divide the analysis window into transient and post-transient
/// segments: either an explicit split time, or the first time the amplitude
/// envelope decays below `envelope_fraction` of its starting value.
struct SplitPolicy {
    std::optional<double> split_time;
    double envelope_fraction = 0.2;

    static SplitPolicy explicit_at(double t) { return {t, 0.2}; }
    static SplitPolicy automatic(double rho = 0.2) { return {std::nullopt, rho}; }
};

/// A second-order combination mode: eigenvalue sum of two fitted modes,
/// annotated with the natural mode it lands closest to.
struct ResonanceCandidate {
    int parent_k = 0; // indices into the natural ModeSet
    int parent_l = 0;
    std::complex<double> lambda;  // exactly lambda_k + lambda_l
    std::optional<int> target;    // nearest natural mode, if any
    double detuning = 0.0;        // |lambda_k + lambda_l - lambda_target|
};

struct NearResonance {
    int k = 0, l = 0, j = 0;
    double detuning = 0.0;
};

struct ExtendedOptions {
    double eps_freq_hz = 0.1;  // near-resonance frequency tolerance
    double eps_damp = 0.5;     // near-resonance damping tolerance, 1/s
    double damp_floor = -5.0;  // discard candidates decaying faster than this
    double prune_rel = 1e-3;   // candidate |B| threshold relative to max natural |B|
};

struct ExtendedResult {
    ModeSet natural_modes;   // classical fit of the post-transient segment
    ModeSet transient_modes; // fixed-eigenvalue fit of the transient segment
    std::vector<ResonanceCandidate> candidates; // all constructed candidates
    std::vector<NearResonance> near_resonance;  // detected triples, detuning ascending
    double split_time = 0.0;
    Interval segment1, segment2;
    double residual_seg1 = 0.0; // relative LS residuals of the two fits
    double residual_seg2 = 0.0;
    // error index of the extended fit vs the classical full-window fit,
    // both evaluated over the transient segment
    double extended_error_seg1_percent = 0.0;
    double classical_error_seg1_percent = 0.0;
};

/// Segment the window at the policy's split point. The first segment owns
/// samples in [start, split), the second [split, end].
std::pair<Interval, Interval> split_window(const Signal& signal, const std::string& channel,
                                           const Interval& window, const SplitPolicy& policy,
                                           int min_segment_samples = 3);

/// All (k <= l, j) triples with |Im(l_k+l_l-l_j)|/2pi <= eps_freq and
/// |Re(l_k+l_l-l_j)| <= eps_damp, sorted by detuning ascending.
std::vector<NearResonance> detect_near_resonance(const ModeSet& natural, double eps_freq_hz,
                                                 double eps_damp);

/// Eigenvalue sums of every unordered mode pair (self-pairs and dc pairings
/// included), pruned to |f| <= f_max and damping >= damp_floor, conjugate
/// closed, deduplicated, and annotated with the nearest natural target.
std::vector<ResonanceCandidate> build_resonance_candidates(const ModeSet& natural, double f_max_hz,
                                                           double damp_floor);

/// Fit the transient segment on the fixed eigenvalue basis natural+candidates,
/// solving only for contributions. Candidates with |B| below prune_rel times
/// the largest natural |B| are dropped and the system re-solved once.
ModeSet extended_fit(const Signal& signal, const std::string& channel, const Interval& segment1,
                     const ModeSet& natural, const std::vector<ResonanceCandidate>& candidates,
                     double prune_rel = 1e-3);

/// The whole pipeline: split, classical fit of segment 2, candidate
/// construction, fixed-eigenvalue refit of segment 1, plus diagnostics.
ExtendedResult run_extended_prony(const Signal& signal, const std::string& channel,
                                  const Interval& window, const SplitPolicy& policy, int order,
                                  const ExtendedOptions& opts = {});

} // namespace ringdown
