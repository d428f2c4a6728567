#include "ringdown/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ringdown/config.hpp"
#include "ringdown/csv.hpp"
#include "ringdown/designed.hpp"
#include "ringdown/envelope.hpp"
#include "ringdown/errors.hpp"
#include "ringdown/metrics.hpp"
#include "ringdown/modeshape.hpp"
#include "ringdown/normalform.hpp"
#include "ringdown/odes.hpp"
#include "ringdown/prony.hpp"
#include "ringdown/report.hpp"
#include "ringdown/resonance.hpp"

namespace ringdown::cli {

namespace {

Interval parse_interval(const std::string& text) {
    const std::size_t sep = text.find(':');
    if (sep == std::string::npos)
        throw UsageError("expected '<start>:<end>', got '" + text + "'");
    try {
        return {std::stod(text.substr(0, sep)), std::stod(text.substr(sep + 1))};
    } catch (const std::exception&) {
        throw UsageError("cannot parse interval '" + text + "'");
    }
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw UsageError("cannot parse number list '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError("empty number list");
    return out;
}

// ---- generate ----

struct GenerateArgs {
    std::string designed;
    std::string spec_path;
    std::string system_path;
    std::string x0_text;
    double t_end = 25.0;
    double dt = 0.01;
    std::string out;
};

int cmd_generate(const GenerateArgs& a) {
    const int sources = static_cast<int>(!a.designed.empty()) +
                        static_cast<int>(!a.spec_path.empty()) +
                        static_cast<int>(!a.system_path.empty());
    if (sources != 1)
        throw UsageError("choose exactly one of --designed, --spec, --system");

    if (!a.system_path.empty()) {
        const PolynomialSystem sys = load_polynomial_system(a.system_path);
        if (a.x0_text.empty()) throw UsageError("--system needs --x0");
        const std::vector<double> x0v = parse_number_list(a.x0_text);
        if (static_cast<int>(x0v.size()) != sys.n)
            throw UsageError("--x0 length does not match the system dimension");
        Eigen::VectorXd x0(sys.n);
        for (int i = 0; i < sys.n; ++i) x0[i] = x0v[static_cast<std::size_t>(i)];
        const int steps = static_cast<int>(std::llround(a.t_end / a.dt));
        const Eigen::MatrixXd traj = rk4(sys.field(), x0, a.dt, steps);
        std::vector<std::string> names(static_cast<std::size_t>(sys.n));
        std::vector<std::vector<double>> cols(static_cast<std::size_t>(sys.n));
        for (int i = 0; i < sys.n; ++i) {
            names[static_cast<std::size_t>(i)] = "x" + std::to_string(i);
            cols[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(traj.rows()));
            for (Eigen::Index k = 0; k < traj.rows(); ++k)
                cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = traj(k, i);
        }
        write_waveforms(a.out, Signal(0.0, a.dt, names, cols));
        std::cout << "wrote " << traj.rows() << " samples x " << sys.n << " states to " << a.out
                  << "\n";
        return 0;
    }

    DesignedSignalSpec spec;
    if (!a.designed.empty()) {
        if (a.designed != "table1")
            throw UsageError("unknown built-in designed signal '" + a.designed + "'");
        spec = near_resonant_demo_spec();
    } else {
        spec = load_designed_spec(a.spec_path);
    }
    const Signal sig = generate_designed(spec, a.t_end, a.dt);
    write_waveforms(a.out, sig);
    std::cout << "wrote " << sig.size() << " samples to " << a.out << "\n";
    return 0;
}

// ---- analyze ----

struct AnalyzeArgs {
    std::string input;
    std::string config_path;
    std::string method = "prony";
    std::vector<std::string> channels;
    std::string window_text;
    std::optional<double> split;
    std::optional<double> auto_split_rho;
    std::optional<int> order;
    std::optional<double> eps_freq, eps_damp, damp_floor, prune;
    std::string report_path;
    std::string recon_path;
    std::string recon_window_text;
};

std::vector<ModeShape> shapes_for(const Signal& signal, const std::vector<std::string>& channels,
                                  const ModeSet& basis, const Interval& segment) {
    std::vector<ModeShape> shapes;
    if (channels.size() < 2) return shapes;
    const MultiChannelFit fit = multichannel_fit(signal, channels, basis.eigenvalues(), segment);
    for (std::size_t c = 0; c < channels.size(); ++c)
        if (!fit.channel_error[c].empty())
            std::cerr << "warning: channel '" << channels[c]
                      << "' failed to solve: " << fit.channel_error[c] << "\n";

    // one shape per positive-frequency mode, resonance modes included
    for (std::size_t m = 0; m < basis.modes.size(); ++m) {
        if (basis.modes[m].lambda.imag() <= 1e-6) continue;
        const Eigen::VectorXcd column = fit.contributions.col(static_cast<Eigen::Index>(m));
        if (column.cwiseAbs().maxCoeff() == 0.0) continue;
        shapes.push_back(normalize_shape(channels, column, basis.modes[m].lambda));
    }
    return shapes;
}

int cmd_analyze(const AnalyzeArgs& a) {
    AnalysisConfig cfg;
    if (!a.config_path.empty()) cfg = load_analysis_config(a.config_path);
    if (!a.channels.empty()) cfg.channels = a.channels;
    if (!a.window_text.empty()) cfg.window = parse_interval(a.window_text);
    if (a.split) cfg.split_time = *a.split;
    if (a.auto_split_rho) {
        cfg.envelope_fraction = *a.auto_split_rho;
        cfg.split_time.reset();
    }
    if (a.order) cfg.order = *a.order;
    if (a.eps_freq) cfg.extended.eps_freq_hz = *a.eps_freq;
    if (a.eps_damp) cfg.extended.eps_damp = *a.eps_damp;
    if (a.damp_floor) cfg.extended.damp_floor = *a.damp_floor;
    if (a.prune) cfg.extended.prune_rel = *a.prune;
    if (!a.report_path.empty()) cfg.report_path = a.report_path;
    if (!a.recon_path.empty()) cfg.reconstruction_path = a.recon_path;
    if (cfg.order < 1) throw UsageError("model order must be >= 1");

    const Signal signal = load_waveforms(a.input);
    if (cfg.channels.empty()) cfg.channels = signal.channel_names();
    for (const auto& c : cfg.channels)
        if (!signal.has_channel(c)) throw UnknownChannel("unknown channel '" + c + "'");
    const std::string primary = cfg.channels.front();
    const Interval window = cfg.window ? *cfg.window : signal.support();
    const Interval recon_window =
        a.recon_window_text.empty() ? window : parse_interval(a.recon_window_text);

    auto recon_grid = [&]() {
        auto [first, last] = signal.sample_range(recon_window);
        return uniform_grid(signal.time(first), signal.dt(), last - first + 1);
    };

    if (a.method == "prony") {
        const ModeSet fit = fit_prony(signal, primary, window, cfg.order);
        std::cout << "fit " << aggregate_modes(fit).size() << " modes on channel '" << primary
                  << "'\n";
        if (!cfg.report_path.empty())
            write_text_file(cfg.report_path, render_modeset_report(fit, primary));
        if (!cfg.reconstruction_path.empty()) {
            const std::vector<double> grid = recon_grid();
            const std::vector<double> recon = reconstruct(fit, grid);
            write_waveforms(cfg.reconstruction_path,
                            Signal(grid.front(), signal.dt(), {primary}, {recon}));
        }
        return 0;
    }
    if (a.method == "extended") {
        SplitPolicy policy = cfg.split_time ? SplitPolicy::explicit_at(*cfg.split_time)
                                            : SplitPolicy::automatic(cfg.envelope_fraction
                                                                         ? *cfg.envelope_fraction
                                                                         : 0.2);
        const ExtendedResult result =
            run_extended_prony(signal, primary, window, policy, cfg.order, cfg.extended);
        int resonance_kept = 0;
        for (const auto& m : result.transient_modes.modes)
            if (m.kind == ModeKind::resonance && m.lambda.imag() > 1e-6) ++resonance_kept;
        std::cout << "natural modes: " << aggregate_modes(result.natural_modes).size()
                  << ", retained resonance modes: " << resonance_kept << ", split at "
                  << JsonWriter::format_number(result.split_time) << " s\n";
        const std::vector<ModeShape> shapes =
            shapes_for(signal, cfg.channels, result.transient_modes, result.segment1);
        if (!cfg.report_path.empty())
            write_text_file(cfg.report_path, render_extended_report(result, primary, shapes));
        if (!cfg.reconstruction_path.empty()) {
            const std::vector<double> grid = recon_grid();
            // composite record model: transient fit before the split, the
            // post-transient fit after it
            std::vector<double> recon(grid.size());
            const std::vector<double> r1 = reconstruct(result.transient_modes, grid);
            const std::vector<double> r2 = reconstruct(result.natural_modes, grid);
            for (std::size_t k = 0; k < grid.size(); ++k)
                recon[k] = grid[k] < result.split_time ? r1[k] : r2[k];
            write_waveforms(cfg.reconstruction_path,
                            Signal(grid.front(), signal.dt(), {primary}, {recon}));
        }
        return 0;
    }
    throw UsageError("unknown method '" + a.method + "' (expected prony or extended)");
}

// ---- normalform ----

struct NormalFormArgs {
    std::string system_path;
    std::string x0_text;
    double fd_step = 1e-4;
    double detuning_floor = 1e-3;
    double t_end = 5.0;
    double dt = 0.01;
    std::string report_path;
    std::string response_path;
};

int cmd_normalform(const NormalFormArgs& a) {
    const PolynomialSystem sys = load_polynomial_system(a.system_path);
    const QuadraticModel quad = expand_second_order(sys.field(), sys.equilibrium, a.fd_step);
    const ModalModel modal = to_modal(quad);
    const HTensor h = h_coefficients(modal, a.detuning_floor);
    const ResonanceDegree degree = resonance_degree(modal);

    Eigen::VectorXcd z0 = Eigen::VectorXcd::Zero(sys.n);
    if (!a.x0_text.empty()) {
        const std::vector<double> x0v = parse_number_list(a.x0_text);
        if (static_cast<int>(x0v.size()) != sys.n)
            throw UsageError("--x0 length does not match the system dimension");
        Eigen::VectorXd x0(sys.n);
        for (int i = 0; i < sys.n; ++i) x0[i] = x0v[static_cast<std::size_t>(i)];
        z0 = initial_z(modal, h, x0);
    }

    if (!a.report_path.empty())
        write_text_file(a.report_path, render_normalform_report(modal, h, degree, z0));

    if (!a.response_path.empty()) {
        if (a.x0_text.empty()) throw UsageError("--response needs --x0");
        const std::size_t count = static_cast<std::size_t>(std::llround(a.t_end / a.dt)) + 1;
        const std::vector<double> grid = uniform_grid(0.0, a.dt, count);
        const Eigen::MatrixXd traj = analytic_response(modal, h, z0, grid);
        std::vector<std::string> names(static_cast<std::size_t>(sys.n));
        std::vector<std::vector<double>> cols(static_cast<std::size_t>(sys.n));
        for (int i = 0; i < sys.n; ++i) {
            names[static_cast<std::size_t>(i)] = "x" + std::to_string(i);
            cols[static_cast<std::size_t>(i)].resize(count);
            for (std::size_t k = 0; k < count; ++k)
                cols[static_cast<std::size_t>(i)][k] = traj(static_cast<Eigen::Index>(k), i);
        }
        write_waveforms(a.response_path, Signal(0.0, a.dt, names, cols));
    }

    std::cout << "eigenvalues:";
    for (int j = 0; j < modal.n(); ++j)
        std::cout << ' ' << JsonWriter::format_number(modal.eigenvalues[j].real()) << (modal.eigenvalues[j].imag() >= 0 ? "+" : "-")
                  << JsonWriter::format_number(std::abs(modal.eigenvalues[j].imag())) << 'j';
    std::cout << "\nmin detuning " << JsonWriter::format_number(degree.min_detuning)
              << " at (k=" << degree.k << ", l=" << degree.l << " -> j=" << degree.j << ")\n"
              << "masked h entries: " << h.masked_count << "\n";
    return 0;
}

// ---- compare ----

struct CompareArgs {
    std::string reference_path;
    std::vector<std::string> candidate_paths;
    std::string channel;
    std::string windows_text;
    std::string report_path;
};

int cmd_compare(const CompareArgs& a) {
    const Signal reference = load_waveforms(a.reference_path);
    const std::string channel =
        a.channel.empty() ? reference.channel_names().front() : a.channel;
    const std::vector<double>& ref_data = reference.channel(channel);

    std::vector<Interval> subwindows;
    if (!a.windows_text.empty()) {
        std::stringstream ss(a.windows_text);
        std::string cell;
        while (std::getline(ss, cell, ',')) subwindows.push_back(parse_interval(cell));
    }

    std::vector<std::string> labels;
    std::vector<ErrorReport> reports;
    for (const auto& path : a.candidate_paths) {
        const Signal cand = load_waveforms(path);
        const std::string cand_channel =
            cand.has_channel(channel) ? channel : cand.channel_names().front();
        if (std::abs(cand.dt() - reference.dt()) > 1e-9 * reference.dt())
            throw LengthMismatch("candidate '" + path + "' sampling interval differs");

        // align on the overlapping sample range
        const double t_start = std::max(reference.t0(), cand.t0());
        const double t_end = std::min(reference.support().end, cand.support().end);
        if (!(t_end > t_start))
            throw LengthMismatch("candidate '" + path + "' does not overlap the reference");
        const Interval common{t_start, t_end};
        const std::vector<double> r = reference.slice(channel, common);
        const std::vector<double> c = cand.slice(cand_channel, common);
        if (r.size() != c.size())
            throw LengthMismatch("candidate '" + path + "' grid is offset from the reference");

        labels.push_back(path);
        reports.push_back(
            windowed_error(c, r, reference.window_start_time(common), reference.dt(), subwindows));
    }

    // plain table: one row per candidate, one column per window
    std::printf("%-32s %14s", "candidate", "full");
    for (const auto& wdw : subwindows)
        std::printf(" %9s-%-6s", JsonWriter::format_number(wdw.start).c_str(),
                    JsonWriter::format_number(wdw.end).c_str());
    std::printf("\n");
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::printf("%-32s %13s%%", labels[i].c_str(),
                    JsonWriter::format_number(reports[i].percent).c_str());
        for (const auto& b : reports[i].breakdown)
            std::printf(" %15s%%", JsonWriter::format_number(b.percent).c_str());
        std::printf("\n");
    }

    if (!a.report_path.empty())
        write_text_file(a.report_path, render_error_report(labels, reports));
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"ringdown: modal analysis of oscillatory ringdown records"};
    app.footer("Exit codes: 0 success, 2 usage, 3 ingestion, 4 numerical, 5 segmentation.");
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand(
        "generate", "Synthesize a test waveform (designed signal or polynomial-system ringdown)");
    generate->add_option("--designed", gen.designed, "built-in designed signal name (table1)");
    generate->add_option("--spec", gen.spec_path, "designed-signal spec JSON");
    generate->add_option("--system", gen.system_path, "polynomial system JSON (RK4 ringdown)");
    generate->add_option("--x0", gen.x0_text, "initial state, comma separated");
    generate->add_option("--t-end", gen.t_end, "record length in seconds")->capture_default_str();
    generate->add_option("--dt", gen.dt, "sampling interval in seconds")->capture_default_str();
    generate->add_option("--out", gen.out, "output waveform CSV")->required();

    AnalyzeArgs an;
    CLI::App* analyze = app.add_subcommand("analyze", "Fit modes to a waveform channel");
    analyze->add_option("--input", an.input, "waveform CSV")->required();
    analyze->add_option("--config", an.config_path, "analysis config JSON (flags override)");
    analyze->add_option("--method", an.method, "prony | extended")->capture_default_str();
    analyze->add_option("--channel", an.channels, "channel name(s); first is the fit channel");
    analyze->add_option("--window", an.window_text, "analysis window start:end in seconds");
    double split_v = 0, rho_v = 0;
    CLI::Option* split_opt = analyze->add_option("--split", split_v, "explicit split time (s)");
    CLI::Option* rho_opt =
        analyze->add_option("--auto-split", rho_v, "automatic split envelope fraction in (0,1)");
    int order_v = 0;
    CLI::Option* order_opt = analyze->add_option("--order", order_v, "model order p");
    double eps_f = 0, eps_d = 0, floor_v = 0, prune_v = 0;
    CLI::Option* epsf_opt =
        analyze->add_option("--eps-freq", eps_f, "near-resonance frequency tolerance (Hz)");
    CLI::Option* epsd_opt =
        analyze->add_option("--eps-damp", eps_d, "near-resonance damping tolerance (1/s)");
    CLI::Option* floor_opt =
        analyze->add_option("--damp-floor", floor_v, "candidate damping floor (1/s)");
    CLI::Option* prune_opt =
        analyze->add_option("--prune", prune_v, "candidate |B| pruning threshold, relative");
    analyze->add_option("--report", an.report_path, "mode report JSON path");
    analyze->add_option("--recon", an.recon_path, "reconstruction CSV path");
    analyze->add_option("--recon-window", an.recon_window_text,
                        "reconstruction window start:end (default: analysis window)");

    NormalFormArgs nf;
    CLI::App* normalform = app.add_subcommand(
        "normalform", "Second-order modal model, transform coefficients and analytic response");
    normalform->add_option("--system", nf.system_path, "polynomial system JSON")->required();
    normalform->add_option("--x0", nf.x0_text, "initial state, comma separated");
    normalform->add_option("--fd-step", nf.fd_step, "finite-difference step")->capture_default_str();
    normalform->add_option("--detuning-floor", nf.detuning_floor, "mask |l_k+l_l-l_j| below this")
        ->capture_default_str();
    normalform->add_option("--t-end", nf.t_end, "response length (s)")->capture_default_str();
    normalform->add_option("--dt", nf.dt, "response sampling interval (s)")->capture_default_str();
    normalform->add_option("--report", nf.report_path, "model report JSON path");
    normalform->add_option("--response", nf.response_path, "analytic response CSV path");

    CompareArgs cmp;
    CLI::App* compare =
        app.add_subcommand("compare", "Error indices of reconstructions against a reference");
    compare->add_option("--reference", cmp.reference_path, "reference waveform CSV")->required();
    compare->add_option("--candidate", cmp.candidate_paths, "candidate waveform CSV (repeatable)")
        ->required();
    compare->add_option("--channel", cmp.channel, "channel to compare (default: first)");
    compare->add_option("--windows", cmp.windows_text, "subwindows a:b,c:d,...");
    compare->add_option("--report", cmp.report_path, "error report JSON path");

    std::vector<const char*> argv;
    argv.push_back("ringdown");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }
        if (split_opt->count()) an.split = split_v;
        if (rho_opt->count()) an.auto_split_rho = rho_v;
        if (order_opt->count()) an.order = order_v;
        if (epsf_opt->count()) an.eps_freq = eps_f;
        if (epsd_opt->count()) an.eps_damp = eps_d;
        if (floor_opt->count()) an.damp_floor = floor_v;
        if (prune_opt->count()) an.prune = prune_v;

        if (generate->parsed()) return cmd_generate(gen);
        if (analyze->parsed()) return cmd_analyze(an);
        if (normalform->parsed()) return cmd_normalform(nf);
        if (compare->parsed()) return cmd_compare(cmp);
        throw UsageError("no subcommand given");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace ringdown::cli
