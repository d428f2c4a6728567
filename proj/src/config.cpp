#include "ringdown/config.hpp"

#include <fstream>

#include <json.hpp>

#include "ringdown/errors.hpp"

namespace ringdown {

namespace {

nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open '" + path + "' for reading");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IngestError("malformed JSON in '" + path + "': " + e.what());
    }
}

} // namespace

AnalysisConfig load_analysis_config(const std::string& path) {
    const nlohmann::json j = parse_file(path);
    AnalysisConfig cfg;
    try {
        if (j.contains("channels")) cfg.channels = j["channels"].get<std::vector<std::string>>();
        if (j.contains("window")) {
            const auto w = j["window"].get<std::vector<double>>();
            if (w.size() != 2) throw IngestError("config 'window' needs [start, end]");
            cfg.window = Interval{w[0], w[1]};
        }
        if (j.contains("split_time")) cfg.split_time = j["split_time"].get<double>();
        if (j.contains("envelope_fraction"))
            cfg.envelope_fraction = j["envelope_fraction"].get<double>();
        if (j.contains("order")) cfg.order = j["order"].get<int>();
        if (j.contains("eps_freq_hz")) cfg.extended.eps_freq_hz = j["eps_freq_hz"].get<double>();
        if (j.contains("eps_damp")) cfg.extended.eps_damp = j["eps_damp"].get<double>();
        if (j.contains("damp_floor")) cfg.extended.damp_floor = j["damp_floor"].get<double>();
        if (j.contains("prune_rel")) cfg.extended.prune_rel = j["prune_rel"].get<double>();
        if (j.contains("report")) cfg.report_path = j["report"].get<std::string>();
        if (j.contains("reconstruction"))
            cfg.reconstruction_path = j["reconstruction"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw IngestError("bad analysis config '" + path + "': " + e.what());
    }
    return cfg;
}

PolynomialSystem load_polynomial_system(const std::string& path) {
    const nlohmann::json j = parse_file(path);
    PolynomialSystem sys;
    try {
        sys.n = j.at("n").get<int>();
        if (sys.n < 1) throw IngestError("system dimension must be >= 1");
        sys.equilibrium = Eigen::VectorXd::Zero(sys.n);
        if (j.contains("equilibrium")) {
            const auto eq = j["equilibrium"].get<std::vector<double>>();
            if (static_cast<int>(eq.size()) != sys.n)
                throw IngestError("equilibrium length does not match n");
            for (int i = 0; i < sys.n; ++i) sys.equilibrium[i] = eq[static_cast<std::size_t>(i)];
        }
        const auto& f = j.at("f");
        if (static_cast<int>(f.size()) != sys.n)
            throw IngestError("'f' must hold one monomial list per state");
        sys.rhs.resize(static_cast<std::size_t>(sys.n));
        for (int i = 0; i < sys.n; ++i) {
            for (const auto& term : f[static_cast<std::size_t>(i)]) {
                Monomial m;
                m.coeff = term.at("c").get<double>();
                if (term.contains("vars")) m.vars = term["vars"].get<std::vector<int>>();
                if (m.vars.size() > 2)
                    throw IngestError("monomials may reference at most two states");
                for (int v : m.vars)
                    if (v < 0 || v >= sys.n) throw IngestError("monomial state index out of range");
                sys.rhs[static_cast<std::size_t>(i)].push_back(m);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw IngestError("bad system description '" + path + "': " + e.what());
    }
    return sys;
}

DesignedSignalSpec load_designed_spec(const std::string& path) {
    const nlohmann::json j = parse_file(path);
    DesignedSignalSpec spec;
    try {
        if (j.contains("dc")) {
            spec.dc.damping = j["dc"].value("damping", 0.0);
            spec.dc.amplitude = j["dc"].value("amplitude", 0.0);
        }
        if (j.contains("oscillatory"))
            for (const auto& m : j["oscillatory"]) {
                OscillatoryTerm t;
                t.damping = m.value("damping", 0.0);
                t.freq_hz = m.at("freq_hz").get<double>();
                t.amplitude = m.value("amplitude", 0.0);
                t.phase_rad = m.value("phase_rad", 0.0);
                spec.oscillatory.push_back(t);
            }
        if (j.contains("drift")) {
            DriftTerm d;
            d.damping = j["drift"].value("damping", 0.0);
            d.f_min_hz = j["drift"].at("f_min_hz").get<double>();
            d.f_max_hz = j["drift"].at("f_max_hz").get<double>();
            d.amplitude = j["drift"].value("amplitude", 0.0);
            d.exponent = j["drift"].value("exponent", 2.0);
            d.phase_rad = j["drift"].value("phase_rad", 0.0);
            spec.drift = d;
        }
    } catch (const nlohmann::json::exception& e) {
        throw IngestError("bad designed-signal spec '" + path + "': " + e.what());
    }
    return spec;
}

} // namespace ringdown
