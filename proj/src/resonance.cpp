#include "ringdown/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ringdown/envelope.hpp"
#include "ringdown/errors.hpp"
#include "ringdown/metrics.hpp"

namespace ringdown {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double kDuplicateTol = 1e-9;

void check_segment_length(const Signal& signal, const Interval& seg, bool include_end,
                          int min_samples, const char* which) {
    try {
        auto [first, last] = signal.sample_range(seg, include_end);
        if (static_cast<long>(last - first + 1) < min_samples)
            throw SegmentTooShort(std::string(which) + " segment holds too few samples");
    } catch (const EmptyWindow&) {
        throw SegmentTooShort(std::string(which) + " segment holds too few samples");
    }
}

} // namespace

std::pair<Interval, Interval> split_window(const Signal& signal, const std::string& channel,
                                           const Interval& window, const SplitPolicy& policy,
                                           int min_segment_samples) {
    double split = 0.0;
    if (policy.split_time) {
        split = *policy.split_time;
        if (!(split > window.start && split < window.end))
            throw UsageError("explicit split time must lie inside the analysis window");
    } else {
        if (!(policy.envelope_fraction > 0.0 && policy.envelope_fraction < 1.0))
            throw UsageError("envelope fraction must lie in (0,1)");
        const Envelope env = envelope(signal, channel, window);
        const double threshold = policy.envelope_fraction * env.amplitudes.front();
        const double hold = 1.0; // must stay below threshold this long
        const std::size_t n = env.times.size();
        std::size_t hold_samples =
            static_cast<std::size_t>(std::ceil(hold / signal.dt()));
        bool found = false;
        for (std::size_t k = 0; k < n && !found; ++k) {
            if (env.amplitudes[k] >= threshold) continue;
            std::size_t j = k;
            while (j < n && env.amplitudes[j] < threshold) ++j;
            if (j - k >= hold_samples || j == n) {
                split = env.times[k];
                found = true;
            }
        }
        if (!found) throw SplitNotFound("envelope never decays below the split threshold");
        if (!(split > window.start && split < window.end))
            throw SplitNotFound("envelope split point falls on the window edge");
    }
    Interval seg1{window.start, split};
    Interval seg2{split, window.end};
    check_segment_length(signal, seg1, false, min_segment_samples, "transient");
    check_segment_length(signal, seg2, true, min_segment_samples, "post-transient");
    return {seg1, seg2};
}

std::vector<NearResonance> detect_near_resonance(const ModeSet& natural, double eps_freq_hz,
                                                 double eps_damp) {
    std::vector<NearResonance> hits;
    const int n = static_cast<int>(natural.modes.size());
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            const std::complex<double> sum = natural.modes[k].lambda + natural.modes[l].lambda;
            for (int j = 0; j < n; ++j) {
                const std::complex<double> d = sum - natural.modes[j].lambda;
                if (std::abs(d.imag()) / two_pi <= eps_freq_hz && std::abs(d.real()) <= eps_damp)
                    hits.push_back({k, l, j, std::abs(d)});
            }
        }
    std::stable_sort(hits.begin(), hits.end(),
                     [](const NearResonance& a, const NearResonance& b) {
                         return a.detuning < b.detuning;
                     });
    return hits;
}

std::vector<ResonanceCandidate> build_resonance_candidates(const ModeSet& natural, double f_max_hz,
                                                           double damp_floor) {
    std::vector<ResonanceCandidate> out;
    const int n = static_cast<int>(natural.modes.size());
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            const std::complex<double> lambda = natural.modes[k].lambda + natural.modes[l].lambda;
            if (std::abs(lambda.imag()) / two_pi > f_max_hz) continue;
            if (lambda.real() < damp_floor) continue;
            bool dup = false;
            for (const auto& c : out)
                if (std::abs(c.lambda - lambda) < kDuplicateTol) dup = true;
            if (dup) continue;

            ResonanceCandidate cand;
            cand.parent_k = k;
            cand.parent_l = l;
            cand.lambda = lambda;
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                const double d = std::abs(lambda - natural.modes[j].lambda);
                if (d < best) {
                    best = d;
                    cand.target = j;
                    cand.detuning = d;
                }
            }
            out.push_back(cand);
        }
    return out;
}

ModeSet extended_fit(const Signal& signal, const std::string& channel, const Interval& segment1,
                     const ModeSet& natural, const std::vector<ResonanceCandidate>& candidates,
                     double prune_rel) {
    const std::vector<double> samples = signal.slice(channel, segment1, /*include_end=*/false);
    const double t_start = signal.window_start_time(segment1);

    // assemble the fixed basis; drop candidates colliding with a natural eigenvalue
    std::vector<std::complex<double>> lambdas = natural.eigenvalues();
    std::vector<int> cand_index; // basis slot -> candidates[] index
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        bool dup = false;
        for (const auto& l : lambdas)
            if (std::abs(l - candidates[c].lambda) < kDuplicateTol) dup = true;
        if (!dup) {
            lambdas.push_back(candidates[c].lambda);
            cand_index.push_back(static_cast<int>(c));
        }
    }
    if (lambdas.size() + 1 > samples.size())
        throw TooManyModes("transient segment holds fewer samples than basis modes + 1");

    ContributionFit fit = solve_contributions(samples, lambdas, signal.dt(), t_start);

    const std::size_t n_nat = natural.modes.size();
    double max_natural_b = 0.0;
    for (std::size_t i = 0; i < n_nat; ++i)
        max_natural_b = std::max(max_natural_b, std::abs(fit.b[static_cast<Eigen::Index>(i)]));

    // prune unmanifested candidates once, then re-solve on the reduced basis
    std::vector<std::complex<double>> kept_lambdas(lambdas.begin(),
                                                   lambdas.begin() + static_cast<long>(n_nat));
    std::vector<int> kept_cand;
    bool pruned = false;
    for (std::size_t s = n_nat; s < lambdas.size(); ++s) {
        if (std::abs(fit.b[static_cast<Eigen::Index>(s)]) >= prune_rel * max_natural_b) {
            kept_lambdas.push_back(lambdas[s]);
            kept_cand.push_back(cand_index[s - n_nat]);
        } else {
            pruned = true;
        }
    }
    if (pruned) fit = solve_contributions(samples, kept_lambdas, signal.dt(), t_start);

    ModeSet out;
    out.dt = signal.dt();
    out.window = segment1;
    out.reference_time = 0.0;
    for (std::size_t i = 0; i < kept_lambdas.size(); ++i) {
        Mode m;
        m.lambda = kept_lambdas[i];
        m.contribution = fit.b[static_cast<Eigen::Index>(i)];
        if (i < n_nat) {
            m.kind = natural.modes[i].kind;
        } else {
            const auto& cand = candidates[static_cast<std::size_t>(kept_cand[i - n_nat])];
            m.kind = ModeKind::resonance;
            m.parents = std::make_pair(cand.parent_k, cand.parent_l);
        }
        out.modes.push_back(m);
    }
    return out;
}

namespace {

double relative_residual(const Signal& signal, const std::string& channel, const Interval& seg,
                         bool include_end, const ModeSet& modes) {
    const std::vector<double> samples = signal.slice(channel, seg, include_end);
    auto [first, last] = signal.sample_range(seg, include_end);
    (void)last;
    const std::vector<double> grid =
        uniform_grid(signal.time(first), signal.dt(), samples.size());
    const std::vector<double> recon = reconstruct(modes, grid);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        num += (recon[k] - samples[k]) * (recon[k] - samples[k]);
        den += samples[k] * samples[k];
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

} // namespace

ExtendedResult run_extended_prony(const Signal& signal, const std::string& channel,
                                  const Interval& window, const SplitPolicy& policy, int order,
                                  const ExtendedOptions& opts) {
    ExtendedResult result;
    auto [seg1, seg2] = split_window(signal, channel, window, policy, 2 * order + 1);
    result.segment1 = seg1;
    result.segment2 = seg2;
    result.split_time = seg1.end;

    result.natural_modes = fit_prony(signal, channel, seg2, order);
    result.near_resonance =
        detect_near_resonance(result.natural_modes, opts.eps_freq_hz, opts.eps_damp);

    const double f_max = 0.5 / signal.dt();
    result.candidates = build_resonance_candidates(result.natural_modes, f_max, opts.damp_floor);

    result.transient_modes = extended_fit(signal, channel, seg1, result.natural_modes,
                                          result.candidates, opts.prune_rel);

    result.residual_seg1 = relative_residual(signal, channel, seg1, false, result.transient_modes);
    result.residual_seg2 = relative_residual(signal, channel, seg2, true, result.natural_modes);

    // reference comparison over the transient segment: the extended fit vs a
    // classical fit of the whole window
    const std::vector<double> seg1_samples = signal.slice(channel, seg1, false);
    auto [s1_first, s1_last] = signal.sample_range(seg1, false);
    (void)s1_last;
    const std::vector<double> seg1_grid =
        uniform_grid(signal.time(s1_first), signal.dt(), seg1_samples.size());
    const std::vector<double> ext_recon = reconstruct(result.transient_modes, seg1_grid);
    result.extended_error_seg1_percent = error_index(ext_recon, seg1_samples, signal.dt());

    ModeSet classical = fit_prony(signal, channel, window, order);
    const std::vector<double> cls_recon = reconstruct(classical, seg1_grid);
    result.classical_error_seg1_percent = error_index(cls_recon, seg1_samples, signal.dt());

    return result;
}

} // namespace ringdown
