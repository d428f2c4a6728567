#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ringdown/designed.hpp"
#include "ringdown/errors.hpp"
#include "ringdown/metrics.hpp"
#include "ringdown/prony.hpp"
#include "ringdown/resonance.hpp"

using namespace ringdown;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;

DesignedSignalSpec no_drift_spec() {
    DesignedSignalSpec spec = near_resonant_demo_spec();
    spec.drift.reset();
    return spec;
}

// conjugate-closed reference set with the drifting mode pinned at a frequency
ModeSet table_modes(double f4_hz) {
    ModeSet set;
    set.dt = 0.01;
    set.window = {10.0, 25.0};
    auto add_pair = [&](double a, double f) {
        set.modes.push_back({cplx(a, two_pi * f), cplx(0.5, 0.0), ModeKind::natural, std::nullopt});
        set.modes.push_back({cplx(a, -two_pi * f), cplx(0.5, 0.0), ModeKind::natural, std::nullopt});
    };
    set.modes.push_back({cplx(-0.3199, 0.0), cplx(0.5, 0.0), ModeKind::dc, std::nullopt});
    add_pair(-0.1433, 0.540);
    add_pair(-0.1869, 1.095);
    add_pair(-0.3300, f4_hz);
    return set;
}

int index_of_freq(const ModeSet& set, double f_hz) {
    for (std::size_t i = 0; i < set.modes.size(); ++i)
        if (set.modes[i].lambda.imag() > 0.0 && std::abs(set.modes[i].freq_hz() - f_hz) < 1e-6)
            return static_cast<int>(i);
    return -1;
}

} // namespace

TEST_CASE("explicit split produces the requested segments") {
    const Signal sig = generate_designed(near_resonant_demo_spec(), 25.0, 0.01);
    const auto [seg1, seg2] =
        split_window(sig, "x", {2.0, 25.0}, SplitPolicy::explicit_at(10.0), 15);
    CHECK(seg1.start == 2.0);
    CHECK(seg1.end == 10.0);
    CHECK(seg2.start == 10.0);
    CHECK(seg2.end == 25.0);
    CHECK_THROWS_AS(split_window(sig, "x", {2.0, 25.0}, SplitPolicy::explicit_at(30.0), 15),
                    UsageError);
}

TEST_CASE("automatic split follows the envelope decay") {
    DesignedSignalSpec spec;
    spec.oscillatory = {{-1.0, 2.0, 0.5, 0.0}};
    const Signal sig = generate_designed(spec, 12.0, 0.01);
    const auto [seg1, seg2] = split_window(sig, "x", {0.0, 12.0}, SplitPolicy::automatic(0.2), 5);
    CHECK(std::abs(seg1.end - std::log(5.0)) < 0.15); // ln(1/0.2)
    CHECK(seg2.start == seg1.end);
}

TEST_CASE("automatic split fails on a constant-amplitude sinusoid") {
    DesignedSignalSpec spec;
    spec.oscillatory = {{0.0, 2.0, 0.5, 0.0}};
    const Signal sig = generate_designed(spec, 12.0, 0.01);
    CHECK_THROWS_AS(split_window(sig, "x", {0.0, 12.0}, SplitPolicy::automatic(0.2), 5),
                    SplitNotFound);
}

TEST_CASE("segments must hold enough samples") {
    const Signal sig = generate_designed(near_resonant_demo_spec(), 25.0, 0.01);
    CHECK_THROWS_AS(split_window(sig, "x", {2.0, 25.0}, SplitPolicy::explicit_at(2.05), 15),
                    SegmentTooShort);
}

TEST_CASE("near-resonance detection flags the eigenvalue-sum coincidence") {
    const ModeSet natural = table_modes(1.635);
    const auto hits = detect_near_resonance(natural, 0.1, 0.5);
    REQUIRE_FALSE(hits.empty());
    const int m2 = index_of_freq(natural, 0.540);
    const int m3 = index_of_freq(natural, 1.095);
    const int m4 = index_of_freq(natural, 1.635);
    CHECK(hits.front().k == std::min(m2, m3));
    CHECK(hits.front().l == std::max(m2, m3));
    CHECK(hits.front().j == m4);
    CHECK(hits.front().detuning < 0.01);
    // each unordered pair reported once
    for (std::size_t a = 0; a < hits.size(); ++a)
        for (std::size_t b = a + 1; b < hits.size(); ++b) {
            const bool same =
                hits[a].k == hits[b].k && hits[a].l == hits[b].l && hits[a].j == hits[b].j;
            CHECK_FALSE(same);
        }
}

TEST_CASE("near-resonance detection on degenerate sets") {
    ModeSet single;
    single.dt = 0.01;
    single.modes.push_back({cplx(-3.0, 0.0), cplx(1.0, 0.0), ModeKind::dc, std::nullopt});
    CHECK(detect_near_resonance(single, 0.1, 0.5).empty());

    ModeSet exact;
    exact.dt = 0.01;
    exact.modes.push_back({cplx(-1.0, 0.0), cplx(1.0, 0.0), ModeKind::dc, std::nullopt});
    exact.modes.push_back({cplx(-2.0, 0.0), cplx(1.0, 0.0), ModeKind::dc, std::nullopt});
    const auto hits = detect_near_resonance(exact, 0.1, 0.5);
    REQUIRE_FALSE(hits.empty());
    CHECK(hits.front().detuning == 0.0); // lambda_0 + lambda_0 = lambda_1 exactly
}

TEST_CASE("candidate construction sums every pair") {
    const ModeSet natural = table_modes(1.65);
    const auto candidates = build_resonance_candidates(natural, 50.0, -5.0);
    bool found = false;
    for (const auto& c : candidates) {
        CHECK(std::abs(c.lambda - (natural.modes[c.parent_k].lambda +
                                   natural.modes[c.parent_l].lambda)) <=
              1e-15 * std::abs(c.lambda));
        if (std::abs(c.lambda.imag() / two_pi - 1.635) < 1e-9 &&
            std::abs(c.lambda.real() - (-0.3302)) < 1e-12)
            found = true;
    }
    CHECK(found);

    // conjugate closure of the candidate set
    for (const auto& c : candidates) {
        if (std::abs(c.lambda.imag()) < 1e-12) continue;
        bool partner = false;
        for (const auto& o : candidates)
            if (std::abs(o.lambda - std::conj(c.lambda)) < 1e-12) partner = true;
        CHECK(partner);
    }
}

TEST_CASE("candidate construction degenerate cases") {
    ModeSet dc_only;
    dc_only.dt = 0.01;
    dc_only.modes.push_back({cplx(-0.3199, 0.0), cplx(0.5, 0.0), ModeKind::dc, std::nullopt});
    const auto candidates = build_resonance_candidates(dc_only, 50.0, -5.0);
    REQUIRE(candidates.size() == 1);
    CHECK(std::abs(candidates[0].lambda - cplx(-0.6398, 0.0)) < 1e-15);
    CHECK(candidates[0].parent_k == 0);
    CHECK(candidates[0].parent_l == 0);

    ModeSet empty;
    empty.dt = 0.01;
    CHECK(build_resonance_candidates(empty, 50.0, -5.0).empty());
}

TEST_CASE("candidate pruning respects the frequency and damping limits") {
    const ModeSet natural = table_modes(1.65);
    for (const auto& c : build_resonance_candidates(natural, 2.0, -0.5)) {
        CHECK(std::abs(c.lambda.imag()) / two_pi <= 2.0);
        CHECK(c.lambda.real() >= -0.5);
    }
}

TEST_CASE("extended fit keeps the resonance mode on the drifting signal") {
    const Signal sig = generate_designed(near_resonant_demo_spec(), 25.0, 0.01);
    const ModeSet natural = fit_prony(sig, "x", {10.0, 25.0}, 7);
    const auto candidates = build_resonance_candidates(natural, 50.0, -5.0);
    const ModeSet transient = extended_fit(sig, "x", {2.0, 10.0}, natural, candidates, 1e-3);

    const Mode* resonance = nullptr;
    for (const auto& m : transient.modes)
        if (m.kind == ModeKind::resonance && m.lambda.imag() > 0.0 &&
            std::abs(m.freq_hz() - 1.635) < 0.02)
            resonance = &m;
    REQUIRE(resonance != nullptr);
    CHECK(resonance->parents.has_value());

    // natural contributions stay near 0.5 and the resonance mode is comparable
    for (double f : {0.0, 0.540, 1.095}) {
        const auto idx = transient.nearest_mode(f);
        REQUIRE(idx.has_value());
        CHECK(std::abs(std::abs(transient.modes[*idx].contribution) - 0.5) < 0.05);
    }
    CHECK(std::abs(resonance->contribution) > 0.01);
}

TEST_CASE("extended fit prunes everything on a drift-free signal") {
    const Signal sig = generate_designed(no_drift_spec(), 25.0, 0.01);
    const ModeSet natural = fit_prony(sig, "x", {10.0, 25.0}, 5);
    const auto candidates = build_resonance_candidates(natural, 50.0, -5.0);
    const ModeSet transient = extended_fit(sig, "x", {2.0, 10.0}, natural, candidates, 1e-3);
    for (const auto& m : transient.modes) CHECK(m.kind != ModeKind::resonance);
    for (std::size_t i = 0; i < natural.modes.size(); ++i) {
        const auto idx = transient.nearest_mode(natural.modes[i].freq_hz());
        REQUIRE(idx.has_value());
        CHECK(std::abs(transient.modes[*idx].contribution - natural.modes[i].contribution) < 1e-6);
    }
}

TEST_CASE("extended fit with no candidates reduces to a contribution solve") {
    const Signal sig = generate_designed(no_drift_spec(), 25.0, 0.01);
    const ModeSet natural = fit_prony(sig, "x", {10.0, 25.0}, 5);
    const ModeSet transient = extended_fit(sig, "x", {2.0, 10.0}, natural, {}, 1e-3);
    const std::vector<double> samples = sig.slice("x", {2.0, 10.0}, false);
    const ContributionFit direct =
        solve_contributions(samples, natural.eigenvalues(), sig.dt(), sig.window_start_time({2.0, 10.0}));
    REQUIRE(transient.modes.size() == natural.modes.size());
    for (std::size_t i = 0; i < transient.modes.size(); ++i)
        CHECK(std::abs(transient.modes[i].contribution - direct.b[static_cast<Eigen::Index>(i)]) ==
              0.0);
}

TEST_CASE("full extended pipeline on the designed signal") {
    const Signal sig = generate_designed(near_resonant_demo_spec(), 25.0, 0.01);
    const ExtendedResult result =
        run_extended_prony(sig, "x", {2.0, 25.0}, SplitPolicy::explicit_at(10.0), 7);

    for (double f : {0.0, 0.540, 1.095}) {
        const auto idx = result.natural_modes.nearest_mode(f);
        REQUIRE(idx.has_value());
        CHECK(std::abs(result.natural_modes.modes[*idx].freq_hz() - f) < 1e-3);
    }
    // one retained resonance mode near 1.635 Hz and a natural-like mode near 1.67
    bool has_resonance = false, has_167 = false;
    for (const auto& m : result.transient_modes.modes) {
        if (m.lambda.imag() <= 0.0) continue;
        if (m.kind == ModeKind::resonance && std::abs(m.freq_hz() - 1.635) < 0.03)
            has_resonance = true;
        if (m.kind == ModeKind::natural && std::abs(m.freq_hz() - 1.67) < 0.02) has_167 = true;
    }
    CHECK(has_resonance);
    CHECK(has_167);
    CHECK(result.extended_error_seg1_percent <= result.classical_error_seg1_percent);

    // every transient eigenvalue comes from the natural set or the candidates
    for (const auto& m : result.transient_modes.modes) {
        bool known = false;
        for (const auto& n : result.natural_modes.modes)
            if (std::abs(n.lambda - m.lambda) < 1e-12) known = true;
        for (const auto& c : result.candidates)
            if (std::abs(c.lambda - m.lambda) < 1e-12) known = true;
        CHECK(known);
    }
}

TEST_CASE("extended pipeline degenerates cleanly without drift") {
    const Signal sig = generate_designed(no_drift_spec(), 25.0, 0.01);
    const ExtendedResult result =
        run_extended_prony(sig, "x", {2.0, 25.0}, SplitPolicy::explicit_at(10.0), 5);
    for (const auto& m : result.transient_modes.modes) CHECK(m.kind != ModeKind::resonance);
    CHECK(std::abs(result.extended_error_seg1_percent - result.classical_error_seg1_percent) <
          1e-10);
}

TEST_CASE("extended pipeline rejects undersized segments") {
    const Signal sig = generate_designed(near_resonant_demo_spec(), 25.0, 0.01);
    CHECK_THROWS_AS(
        run_extended_prony(sig, "x", {2.0, 25.0}, SplitPolicy::explicit_at(24.95), 7),
        SegmentTooShort);
}
