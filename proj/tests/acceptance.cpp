// Acceptance suite: every criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ringdown/cli.hpp"
#include "ringdown/csv.hpp"
#include "ringdown/designed.hpp"
#include "ringdown/metrics.hpp"
#include "ringdown/modeshape.hpp"
#include "ringdown/normalform.hpp"
#include "ringdown/odes.hpp"
#include "ringdown/prony.hpp"
#include "ringdown/resonance.hpp"

using namespace ringdown;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Check {
    std::vector<std::string> failures;
    std::string notes;

    void that(bool cond, const std::string& what) {
        if (!cond) failures.push_back(what);
    }
    void note(const std::string& text) {
        if (!notes.empty()) notes += "; ";
        notes += text;
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------- criterion 1 ----------

struct RandomModel {
    std::vector<cplx> lambdas, b;
};

RandomModel random_model(std::mt19937& rng, int q) {
    std::uniform_real_distribution<double> damp(-1.0, 0.5);
    std::uniform_real_distribution<double> mag(0.2, 2.0);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    std::uniform_real_distribution<double> jitter(0.0, 0.4);
    RandomModel m;
    int remaining = q;
    if (remaining % 2 == 1) {
        m.lambdas.emplace_back(damp(rng), 0.0);
        m.b.emplace_back(mag(rng), 0.0);
        --remaining;
    }
    int pair = 0;
    while (remaining > 0) {
        const double f = 0.4 + 1.1 * pair + jitter(rng); // spaced pairs, max < 5 Hz
        const cplx lambda(damp(rng), two_pi * f);
        const cplx bb = std::polar(mag(rng), phase(rng));
        m.lambdas.push_back(lambda);
        m.lambdas.push_back(std::conj(lambda));
        m.b.push_back(bb);
        m.b.push_back(std::conj(bb));
        remaining -= 2;
        ++pair;
    }
    return m;
}

void criterion_exact_recovery(Check& chk) {
    std::mt19937 rng(20240901);
    std::uniform_int_distribution<int> order(1, 8);
    const double dt = 0.01;
    const std::size_t n = 2001; // 20 s at 100 Hz
    double worst_eigen = 0.0, worst_b = 0.0, worst_time = 0.0;

    for (int trial = 0; trial < 50; ++trial) {
        const int q = order(rng);
        const RandomModel m = random_model(rng, q);
        std::vector<double> y(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc;
            for (std::size_t i = 0; i < m.lambdas.size(); ++i)
                acc += m.b[i] * std::exp(m.lambdas[i] * (dt * static_cast<double>(k)));
            y[k] = acc.real();
        }
        const Signal sig(0.0, dt, {"x"}, {y});

        const auto t0 = std::chrono::steady_clock::now();
        const ModeSet fit = fit_prony(sig, "x", sig.support(), q);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        worst_time = std::max(worst_time, elapsed);

        for (std::size_t i = 0; i < m.lambdas.size(); ++i) {
            double best_l = 1e300, best_b = 1e300;
            for (const auto& mode : fit.modes) {
                const double d = std::abs(mode.lambda - m.lambdas[i]);
                if (d < best_l) {
                    best_l = d;
                    best_b = std::abs(std::abs(mode.contribution) - std::abs(m.b[i]));
                }
            }
            worst_eigen = std::max(worst_eigen, best_l);
            worst_b = std::max(worst_b, best_b);
        }
    }
    chk.that(worst_eigen < 1e-8, "max eigenvalue error " + fmt(worst_eigen) + " >= 1e-8");
    chk.that(worst_b < 1e-8, "max |B| error " + fmt(worst_b) + " >= 1e-8");
    chk.that(worst_time < 0.1, "slowest fit " + fmt(worst_time) + " s >= 0.1 s");
    chk.note("max eig err " + fmt(worst_eigen) + ", max |B| err " + fmt(worst_b) +
             ", slowest fit " + fmt(worst_time) + " s");
}

// ---------- criterion 2 ----------

void criterion_designed_signal(Check& chk) {
    const Signal sig = generate_designed(near_resonant_demo_spec(), 25.0, 0.01);
    const ExtendedResult result =
        run_extended_prony(sig, "x", {2.0, 25.0}, SplitPolicy::explicit_at(10.0), 7);

    // (a) natural frequencies and extended-fit contribution factors
    for (double f : {0.0, 0.540, 1.095}) {
        const auto nat = result.natural_modes.nearest_mode(f);
        chk.that(nat.has_value(), "missing natural mode near " + fmt(f));
        if (nat)
            chk.that(std::abs(result.natural_modes.modes[*nat].freq_hz() - f) <= 0.01,
                     "natural frequency near " + fmt(f) + " off by more than 0.01 Hz");
        const auto tr = result.transient_modes.nearest_mode(f);
        chk.that(tr.has_value(), "missing transient mode near " + fmt(f));
        if (tr) {
            const double b = std::abs(result.transient_modes.modes[*tr].contribution);
            chk.that(std::abs(b - 0.5) <= 0.05,
                     "contribution near " + fmt(f) + " Hz is " + fmt(b) + ", not within 10% of 0.5");
        }
    }

    // (b) retained resonance mode at 1.635 Hz with parents (0.540, 1.095)
    const Mode* resonance = nullptr;
    for (const auto& m : result.transient_modes.modes)
        if (m.kind == ModeKind::resonance && m.lambda.imag() > 0.0 &&
            std::abs(m.freq_hz() - 1.635) <= 0.03)
            resonance = &m;
    chk.that(resonance != nullptr, "no retained resonance mode within 1.635 +- 0.03 Hz");
    if (resonance) {
        chk.that(resonance->parents.has_value(), "resonance mode lacks parents");
        if (resonance->parents) {
            const double fk =
                result.natural_modes.modes[static_cast<std::size_t>(resonance->parents->first)]
                    .freq_hz();
            const double fl =
                result.natural_modes.modes[static_cast<std::size_t>(resonance->parents->second)]
                    .freq_hz();
            const double lo = std::min(fk, fl), hi = std::max(fk, fl);
            chk.that(std::abs(lo - 0.540) < 0.01 && std::abs(hi - 1.095) < 0.01,
                     "resonance parents are not the 0.540 and 1.095 Hz modes");
        }
        chk.note("resonance at " + fmt(resonance->freq_hz()) + " Hz, |B| " +
                 fmt(std::abs(resonance->contribution)));
    }

    // (c) the classical full-window fit misplaces the 0.540 Hz mode
    const ModeSet classical = fit_prony(sig, "x", {2.0, 25.0}, 7);
    const auto idx = classical.nearest_mode(0.540);
    chk.that(idx.has_value(), "classical fit produced no modes");
    if (idx) {
        const double err = std::abs(classical.modes[*idx].freq_hz() - 0.540);
        chk.that(err > 0.05, "classical mode-2 frequency error " + fmt(err) + " <= 0.05 Hz");
        chk.note("classical nearest-to-0.540 at " + fmt(classical.modes[*idx].freq_hz()) + " Hz");
    }
}

// ---------- criterion 3 ----------

void criterion_improvement(Check& chk) {
    const Signal sig = generate_designed(near_resonant_demo_spec(), 25.0, 0.01);
    const Interval window{2.0, 25.0};
    const ExtendedResult result =
        run_extended_prony(sig, "x", window, SplitPolicy::explicit_at(10.0), 7);
    const ModeSet classical = fit_prony(sig, "x", window, 7);

    auto [first, last] = sig.sample_range(window);
    const std::vector<double> grid = uniform_grid(sig.time(first), sig.dt(), last - first + 1);
    const std::vector<double> reference(sig.channel(0).begin() + static_cast<long>(first),
                                        sig.channel(0).begin() + static_cast<long>(last) + 1);

    // the extended record model: transient fit before the split, post-transient fit after
    std::vector<double> extended(grid.size());
    const std::vector<double> r1 = reconstruct(result.transient_modes, grid);
    const std::vector<double> r2 = reconstruct(result.natural_modes, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        extended[k] = grid[k] < result.split_time ? r1[k] : r2[k];
    const std::vector<double> classical_recon = reconstruct(classical, grid);

    const std::vector<Interval> segments = {{2.0, 10.0}, {10.0, 25.0}};
    const ErrorReport ext = windowed_error(extended, reference, grid.front(), sig.dt(), segments);
    const ErrorReport cls =
        windowed_error(classical_recon, reference, grid.front(), sig.dt(), segments);

    const double ext_seg1 = ext.breakdown[0].percent, cls_seg1 = cls.breakdown[0].percent;
    const double ext_seg2 = ext.breakdown[1].percent, cls_seg2 = cls.breakdown[1].percent;
    chk.that(ext_seg1 <= cls_seg1, "extended transient error " + fmt(ext_seg1) +
                                       "% exceeds classical " + fmt(cls_seg1) + "%");
    const double hi = std::max(ext_seg2, cls_seg2), lo = std::min(ext_seg2, cls_seg2);
    chk.that(lo > 0.0 ? hi / lo < 2.0 : hi == lo,
             "post-transient errors differ by " + fmt(lo > 0 ? hi / lo : 0.0) + "x >= 2x");
    chk.note("seg1 " + fmt(ext_seg1) + "% vs " + fmt(cls_seg1) + "%, seg2 " + fmt(ext_seg2) +
             "% vs " + fmt(cls_seg2) + "%");
}

// ---------- criterion 4 ----------

VectorField system2() {
    return [](const Eigen::VectorXd& x) {
        Eigen::VectorXd dx(2);
        dx[0] = x[1];
        dx[1] = -9.25 * x[0] - x[1] + 0.4 * x[0] * x[0];
        return dx;
    };
}

VectorField system3() {
    return [](const Eigen::VectorXd& x) {
        Eigen::VectorXd dx(3);
        dx[0] = x[1];
        dx[1] = -9.25 * x[0] - x[1] + 0.4 * x[0] * x[0] + 0.2 * x[0] * x[2];
        dx[2] = -4.0 * x[2] + 0.3 * x[0] * x[1];
        return dx;
    };
}

VectorField system4() {
    return [](const Eigen::VectorXd& x) {
        Eigen::VectorXd dx(4);
        dx[0] = x[1];
        dx[1] = -9.25 * x[0] - x[1] + 0.3 * x[2] * x[2] + 0.2 * x[0] * x[2];
        dx[2] = x[3];
        dx[3] = -56.89 * x[2] - 1.6 * x[3] + 0.25 * x[0] * x[0];
        return dx;
    };
}

void criterion_normalform_oracle(Check& chk) {
    struct Case {
        const char* name;
        VectorField f;
        Eigen::VectorXd x0;
    };
    std::vector<Case> cases;
    {
        Eigen::VectorXd x0(2);
        x0 << 0.05, 0.0;
        cases.push_back({"2-state", system2(), x0});
    }
    {
        Eigen::VectorXd x0(3);
        x0 << 0.05, 0.0, 0.03;
        cases.push_back({"3-state", system3(), x0});
    }
    {
        Eigen::VectorXd x0(4);
        x0 << 0.05, 0.0, 0.03, 0.0;
        cases.push_back({"4-state", system4(), x0});
    }

    const double dt = 1e-3;
    const int steps = 5000;
    std::vector<double> times;
    for (int k = 0; k <= steps; ++k) times.push_back(dt * k);

    for (const auto& c : cases) {
        const Eigen::VectorXd eq = Eigen::VectorXd::Zero(c.x0.size());
        const QuadraticModel model = expand_second_order(c.f, eq);
        const ModalModel modal = to_modal(model);
        chk.that(resonance_degree(modal).min_detuning > 1.0,
                 std::string(c.name) + ": min detuning <= 1");
        const HTensor h = h_coefficients(modal);

        const Eigen::MatrixXd ref = rk4(c.f, c.x0, dt, steps);
        const Eigen::MatrixXd got = analytic_response(modal, h, initial_z(modal, h, c.x0), times);
        const double rel = (got - ref).norm() / ref.norm();
        chk.that(rel < 0.02, std::string(c.name) + ": relative L2 error " + fmt(rel) + " >= 2%");

        std::vector<double> errs;
        for (double scale : {1.0, 0.5, 0.25}) {
            const Eigen::VectorXd x0s = scale * c.x0;
            const Eigen::MatrixXd refs = rk4(c.f, x0s, dt, steps);
            const Eigen::MatrixXd gots =
                analytic_response(modal, h, initial_z(modal, h, x0s), times);
            errs.push_back((gots - refs).norm());
        }
        const double slope = std::log(errs[0] / errs[2]) / std::log(4.0);
        chk.that(slope >= 2.5 && slope <= 3.5,
                 std::string(c.name) + ": error slope " + fmt(slope) + " outside [2.5, 3.5]");
        chk.note(std::string(c.name) + " rel " + fmt(rel) + ", slope " + fmt(slope));
    }
}

// ---------- criterion 5 ----------

void criterion_h_singularity(Check& chk) {
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        ModalModel modal;
        modal.equilibrium = Eigen::VectorXd::Zero(3);
        modal.eigenvalues =
            Eigen::Vector3cd(cplx(-1.0, 0.0), cplx(-2.0, 0.0), cplx(-3.0 + eps, 0.0));
        modal.modal_matrix = Eigen::Matrix3cd::Identity();
        modal.modal_inverse = Eigen::Matrix3cd::Identity();
        modal.quad.assign(3, Eigen::Matrix3cd::Ones());
        const HTensor h = h_coefficients(modal, 1e-4);
        const double got = std::abs(h.h[2](0, 1));
        chk.that(std::abs(got - 1.0 / eps) <= 1e-10 / eps,
                 "|h| at eps " + fmt(eps) + " is " + fmt(got) + ", not 1/eps");
    }
    ModalModel modal;
    modal.equilibrium = Eigen::VectorXd::Zero(3);
    modal.eigenvalues = Eigen::Vector3cd(cplx(-1.0, 0.0), cplx(-2.0, 0.0), cplx(-3.0 + 1e-12, 0.0));
    modal.modal_matrix = Eigen::Matrix3cd::Identity();
    modal.modal_inverse = Eigen::Matrix3cd::Identity();
    modal.quad.assign(3, Eigen::Matrix3cd::Ones());
    const HTensor h = h_coefficients(modal, 1e-3);
    chk.that(h.masked[2](0, 1) == 1, "entry below the detuning floor is not masked");
    for (const auto& hj : h.h)
        chk.that(hj.allFinite(), "masked tensor holds a non-finite entry");
}

// ---------- criterion 6 ----------

void criterion_resonance_degree(Check& chk) {
    Eigen::VectorXcd v(7);
    v << cplx(-0.3199, 0.0), cplx(-0.1433, two_pi * 0.540), cplx(-0.1433, -two_pi * 0.540),
        cplx(-0.1869, two_pi * 1.095), cplx(-0.1869, -two_pi * 1.095),
        cplx(-0.3300, two_pi * 1.635), cplx(-0.3300, -two_pi * 1.635);
    const ResonanceDegree d = resonance_degree(v);
    chk.that(d.k == 1 && d.l == 3 && d.j == 5,
             "argmin triple is (" + std::to_string(d.k) + "," + std::to_string(d.l) + "->" +
                 std::to_string(d.j) + "), expected (1,3->5)");
    chk.note("min detuning " + fmt(d.min_detuning));
}

// ---------- criterion 7 ----------

void criterion_error_index(Check& chk) {
    std::vector<double> ref(501), cand(501);
    for (std::size_t k = 0; k < ref.size(); ++k)
        ref[k] = 1.5 + std::sin(two_pi * 0.7 * 0.01 * static_cast<double>(k));

    cand = ref;
    chk.that(error_index(cand, ref, 0.01) == 0.0, "identical sequences give nonzero error");

    std::fill(cand.begin(), cand.end(), 0.0);
    chk.that(std::abs(error_index(cand, ref, 0.01) - 100.0) <= 1e-12,
             "zero candidate does not give 100%");

    for (std::size_t k = 0; k < ref.size(); ++k) cand[k] = 1.1 * ref[k];
    chk.that(std::abs(error_index(cand, ref, 0.01) - 10.0) <= 1e-12,
             "1.1x candidate does not give 10%");

    for (std::size_t k = 0; k < ref.size(); ++k) cand[k] = ref[k] + 0.1 * std::cos(0.3 * k);
    const double base = error_index(cand, ref, 0.01);
    std::vector<double> rs = ref, cs = cand;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        rs[k] *= -42.5;
        cs[k] *= -42.5;
    }
    chk.that(std::abs(error_index(cs, rs, 0.01) - base) <= 1e-12,
             "joint scaling moved the error index");
}

// ---------- criterion 8 ----------

void criterion_mode_shapes(Check& chk) {
    const double dt = 0.01;
    const std::size_t n = 1501;
    const std::vector<double> gains = {1.0, 0.8, -0.9, -0.7};
    std::vector<std::string> names = {"g1", "g2", "g3", "g4"};
    std::vector<std::vector<double>> cols;
    for (double g : gains) {
        std::vector<double> col(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = dt * static_cast<double>(k);
            col[k] = g * std::exp(-0.2 * t) * std::cos(two_pi * t);
        }
        cols.push_back(std::move(col));
    }
    const Signal sig(0.0, dt, names, cols);
    const std::vector<cplx> eig = {cplx(-0.2, two_pi), cplx(-0.2, -two_pi)};
    const MultiChannelFit fit = multichannel_fit(sig, names, eig, {0.0, 15.0});
    const ModeShape shape = normalize_shape(names, fit.contributions.col(0), eig[0]);

    auto angle = [](const cplx& v) { return std::arg(v) * 180.0 / std::numbers::pi; };
    chk.that(std::abs(angle(shape.phasors[0])) <= 1.0, "g1 angle off zero");
    chk.that(std::abs(angle(shape.phasors[1])) <= 1.0, "g2 angle off zero");
    chk.that(std::abs(std::abs(angle(shape.phasors[2])) - 180.0) <= 1.0, "g3 angle off 180");
    chk.that(std::abs(std::abs(angle(shape.phasors[3])) - 180.0) <= 1.0, "g4 angle off 180");

    const cplx v(0.25, 0.15);
    const AugmentedShape aug =
        combine_resonance_contribution(shape, {v, -v, v, -v}, cplx(-0.3, two_pi * 1.02));
    for (std::size_t c = 0; c < 4; ++c)
        chk.that(std::abs(aug.augmented.phasors[c] - shape.phasors[c]) <= 1e-10,
                 "cancelling phasors changed the shape");
    chk.that(std::abs(aug.augmented.phasors[4]) <= 1e-10, "cancelling phasors left a residue");
}

// ---------- criterion 9 ----------

void criterion_cli_determinism(Check& chk) {
    const fs::path tmp = fs::current_path() / "acceptance_tmp";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    const std::string wave = (tmp / "designed.csv").string();
    const std::string rep1 = (tmp / "rep1.json").string();
    const std::string rep2 = (tmp / "rep2.json").string();

    const auto t0 = std::chrono::steady_clock::now();
    int rc = cli::run({"generate", "--designed", "table1", "--t-end", "25", "--dt", "0.01",
                       "--out", wave});
    chk.that(rc == 0, "generate returned " + std::to_string(rc));
    rc = cli::run({"analyze", "--input", wave, "--method", "extended", "--window", "2:25",
                   "--split", "10", "--order", "7", "--report", rep1});
    chk.that(rc == 0, "analyze returned " + std::to_string(rc));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    chk.that(elapsed < 2.0, "generate+analyze took " + fmt(elapsed) + " s >= 2 s");

    rc = cli::run({"analyze", "--input", wave, "--method", "extended", "--window", "2:25",
                   "--split", "10", "--order", "7", "--report", rep2});
    chk.that(rc == 0, "second analyze returned " + std::to_string(rc));

    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string b1 = slurp(rep1), b2 = slurp(rep2);
    chk.that(!b1.empty(), "report is empty");
    chk.that(b1 == b2, "repeated runs produced different reports");
    chk.note("generate+analyze " + fmt(elapsed) + " s");
    fs::remove_all(tmp);
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Check&)> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "exact recovery of random exponential sums", criterion_exact_recovery},
        {2, "designed-signal replication", criterion_designed_signal},
        {3, "improvement ordering of error indices", criterion_improvement},
        {4, "second-order analytic response vs RK4", criterion_normalform_oracle},
        {5, "h-coefficient singularity and masking", criterion_h_singularity},
        {6, "resonance-degree argmin triple", criterion_resonance_degree},
        {7, "error-index identities", criterion_error_index},
        {8, "mode-shape structure", criterion_mode_shapes},
        {9, "CLI determinism and runtime", criterion_cli_determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Check chk;
        try {
            c.fn(chk);
        } catch (const std::exception& e) {
            chk.failures.push_back(std::string("exception: ") + e.what());
        }
        if (chk.failures.empty()) {
            std::printf("PASS criterion %d: %s%s%s\n", c.id, c.title,
                        chk.notes.empty() ? "" : " -- ", chk.notes.c_str());
        } else {
            ++failed;
            std::printf("FAIL criterion %d: %s -- %s\n", c.id, c.title,
                        chk.failures.front().c_str());
            for (std::size_t i = 1; i < chk.failures.size(); ++i)
                std::printf("     criterion %d also: %s\n", c.id, chk.failures[i].c_str());
        }
    }
    return failed == 0 ? 0 : 1;
}
