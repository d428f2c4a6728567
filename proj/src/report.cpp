#include "ringdown/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <tuple>

#include "ringdown/errors.hpp"

namespace ringdown {

namespace {
constexpr double kDcImagTol = 1e-6;
constexpr double rad2deg = 180.0 / std::numbers::pi;

const char* kind_name(ModeKind k) {
    switch (k) {
        case ModeKind::dc: return "dc";
        case ModeKind::natural: return "natural";
        case ModeKind::resonance: return "resonance";
    }
    return "natural";
}
} // namespace

// ---- JsonWriter ----

std::string JsonWriter::format_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void JsonWriter::prefix() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!stack_.empty()) {
        if (has_items_.back()) out_ += ',';
        has_items_.back() = true;
        out_ += '\n';
        out_.append(stack_.size() * 2, ' ');
    }
}

void JsonWriter::begin_object() {
    prefix();
    out_ += '{';
    stack_.push_back('{');
    has_items_.push_back(false);
}

void JsonWriter::end_object() {
    const bool had = has_items_.back();
    stack_.pop_back();
    has_items_.pop_back();
    if (had) {
        out_ += '\n';
        out_.append(stack_.size() * 2, ' ');
    }
    out_ += '}';
}

void JsonWriter::begin_array() {
    prefix();
    out_ += '[';
    stack_.push_back('[');
    has_items_.push_back(false);
}

void JsonWriter::end_array() {
    const bool had = has_items_.back();
    stack_.pop_back();
    has_items_.pop_back();
    if (had) {
        out_ += '\n';
        out_.append(stack_.size() * 2, ' ');
    }
    out_ += ']';
}

void JsonWriter::key(const std::string& name) {
    prefix();
    out_ += '"';
    out_ += name;
    out_ += "\": ";
    pending_key_ = true;
}

void JsonWriter::value(double v) {
    prefix();
    out_ += format_number(v);
}

void JsonWriter::value(int v) {
    prefix();
    out_ += std::to_string(v);
}

void JsonWriter::value(const std::string& v) {
    prefix();
    out_ += '"';
    for (char c : v) {
        if (c == '"' || c == '\\') out_ += '\\';
        out_ += c;
    }
    out_ += '"';
}

void JsonWriter::value_bool(bool v) {
    prefix();
    out_ += v ? "true" : "false";
}

void JsonWriter::null() {
    prefix();
    out_ += "null";
}

// ---- mode aggregation ----

std::vector<ReportMode> aggregate_modes(const ModeSet& set, std::vector<int>* pair_id_of) {
    std::vector<ReportMode> rows;
    const std::size_t n = set.modes.size();
    std::vector<int> ids(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (ids[i] >= 0) continue;
        const Mode& m = set.modes[i];
        if (m.lambda.imag() < -kDcImagTol) continue; // handled via its +Im partner
        ReportMode row;
        row.kind = kind_name(m.kind);
        row.freq_hz = m.freq_hz();
        row.damping = m.damping();
        row.amplitude = m.amplitude();
        row.phase_deg = m.phase_rad() * rad2deg;
        row.parents = m.parents;
        ids[i] = static_cast<int>(rows.size());
        if (m.lambda.imag() > kDcImagTol) {
            for (std::size_t j = 0; j < n; ++j)
                if (ids[j] < 0 && std::abs(set.modes[j].lambda - std::conj(m.lambda)) < 1e-9)
                    ids[j] = ids[i];
        }
        rows.push_back(row);
    }
    // negative-frequency modes without a +Im partner (should not happen) get rows too
    for (std::size_t i = 0; i < n; ++i) {
        if (ids[i] >= 0) continue;
        const Mode& m = set.modes[i];
        ReportMode row;
        row.kind = kind_name(m.kind);
        row.freq_hz = m.freq_hz();
        row.damping = m.damping();
        row.amplitude = m.amplitude();
        row.phase_deg = m.phase_rad() * rad2deg;
        row.parents = m.parents;
        ids[i] = static_cast<int>(rows.size());
        rows.push_back(row);
    }
    if (pair_id_of) *pair_id_of = ids;
    return rows;
}

namespace {

void append_interval(JsonWriter& w, const Interval& iv) {
    w.begin_array();
    w.value(iv.start);
    w.value(iv.end);
    w.end_array();
}

void append_mode_rows(JsonWriter& w, const std::vector<ReportMode>& rows) {
    w.begin_array();
    for (const auto& r : rows) {
        w.begin_object();
        w.key("kind");
        w.value(r.kind);
        w.key("freq_hz");
        w.value(r.freq_hz);
        w.key("damping_per_s");
        w.value(r.damping);
        w.key("amplitude");
        w.value(r.amplitude);
        w.key("phase_deg");
        w.value(r.phase_deg);
        if (r.parents) {
            w.key("parents");
            w.begin_array();
            w.value(r.parents->first);
            w.value(r.parents->second);
            w.end_array();
        }
        if (r.detuning) {
            w.key("detuning");
            w.value(*r.detuning);
        }
        w.end_object();
    }
    w.end_array();
}

} // namespace

void append_shape(JsonWriter& w, const ModeShape& shape) {
    w.begin_object();
    w.key("freq_hz");
    w.value(std::abs(shape.lambda.imag()) / (2.0 * std::numbers::pi));
    w.key("damping_per_s");
    w.value(shape.lambda.real());
    w.key("reference");
    w.value(shape.reference);
    w.key("phasors");
    w.begin_array();
    for (std::size_t c = 0; c < shape.channels.size(); ++c) {
        w.begin_object();
        w.key("channel");
        w.value(shape.channels[c]);
        w.key("magnitude");
        w.value(std::abs(shape.phasors[c]));
        w.key("angle_deg");
        w.value(std::arg(shape.phasors[c]) * rad2deg);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

std::string render_modeset_report(const ModeSet& set, const std::string& channel) {
    JsonWriter w;
    w.begin_object();
    w.key("schema_version");
    w.value(kReportSchemaVersion);
    w.key("kind");
    w.value("mode_report");
    w.key("channel");
    w.value(channel);
    w.key("window");
    append_interval(w, set.window);
    w.key("dt");
    w.value(set.dt);
    w.key("reference_time");
    w.value(set.reference_time);
    w.key("modes");
    append_mode_rows(w, aggregate_modes(set));
    w.end_object();
    return w.str() + "\n";
}

std::string render_extended_report(const ExtendedResult& result, const std::string& channel,
                                   const std::vector<ModeShape>& shapes) {
    std::vector<int> natural_ids;
    std::vector<ReportMode> natural_rows = aggregate_modes(result.natural_modes, &natural_ids);

    std::vector<ReportMode> transient_rows = aggregate_modes(result.transient_modes);
    for (auto& row : transient_rows) {
        if (!row.parents) continue;
        for (const auto& cand : result.candidates)
            if (cand.parent_k == row.parents->first && cand.parent_l == row.parents->second) {
                row.detuning = cand.detuning;
                break;
            }
        // remap raw natural-mode indices onto aggregated row ids
        const int k = natural_ids[static_cast<std::size_t>(row.parents->first)];
        const int l = natural_ids[static_cast<std::size_t>(row.parents->second)];
        row.parents = std::make_pair(std::min(k, l), std::max(k, l));
    }

    JsonWriter w;
    w.begin_object();
    w.key("schema_version");
    w.value(kReportSchemaVersion);
    w.key("kind");
    w.value("extended_report");
    w.key("channel");
    w.value(channel);
    w.key("window");
    append_interval(w, {result.segment1.start, result.segment2.end});
    w.key("split_time");
    w.value(result.split_time);
    w.key("natural_modes");
    append_mode_rows(w, natural_rows);
    w.key("transient_modes");
    append_mode_rows(w, transient_rows);
    w.key("near_resonance");
    w.begin_array();
    {
        std::vector<std::tuple<int, int, int>> seen;
        for (const auto& nr : result.near_resonance) {
            int k = natural_ids[static_cast<std::size_t>(nr.k)];
            int l = natural_ids[static_cast<std::size_t>(nr.l)];
            const int j = natural_ids[static_cast<std::size_t>(nr.j)];
            if (k > l) std::swap(k, l);
            if (std::find(seen.begin(), seen.end(), std::make_tuple(k, l, j)) != seen.end())
                continue;
            seen.emplace_back(k, l, j);
            w.begin_object();
            w.key("k");
            w.value(k);
            w.key("l");
            w.value(l);
            w.key("j");
            w.value(j);
            w.key("detuning");
            w.value(nr.detuning);
            w.end_object();
        }
    }
    w.end_array();
    w.key("diagnostics");
    w.begin_object();
    w.key("residual_seg1");
    w.value(result.residual_seg1);
    w.key("residual_seg2");
    w.value(result.residual_seg2);
    w.key("extended_error_seg1_percent");
    w.value(result.extended_error_seg1_percent);
    w.key("classical_error_seg1_percent");
    w.value(result.classical_error_seg1_percent);
    w.end_object();
    if (!shapes.empty()) {
        w.key("shapes");
        w.begin_array();
        for (const auto& s : shapes) append_shape(w, s);
        w.end_array();
    }
    w.end_object();
    return w.str() + "\n";
}

std::string render_error_report(const std::vector<std::string>& labels,
                                const std::vector<ErrorReport>& reports) {
    JsonWriter w;
    w.begin_object();
    w.key("schema_version");
    w.value(kReportSchemaVersion);
    w.key("kind");
    w.value("error_report");
    w.key("entries");
    w.begin_array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        w.begin_object();
        w.key("label");
        w.value(i < labels.size() ? labels[i] : std::to_string(i));
        w.key("window");
        append_interval(w, reports[i].window);
        w.key("error_percent");
        w.value(reports[i].percent);
        w.key("breakdown");
        w.begin_array();
        for (const auto& b : reports[i].breakdown) {
            w.begin_object();
            w.key("window");
            append_interval(w, b.window);
            w.key("error_percent");
            w.value(b.percent);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

std::string render_normalform_report(const ModalModel& modal, const HTensor& h,
                                     const ResonanceDegree& degree, const Eigen::VectorXcd& z0) {
    const int n = modal.n();
    JsonWriter w;
    w.begin_object();
    w.key("schema_version");
    w.value(kReportSchemaVersion);
    w.key("kind");
    w.value("normalform_report");
    w.key("n");
    w.value(n);
    w.key("eigenvalues");
    w.begin_array();
    for (int j = 0; j < n; ++j) {
        w.begin_object();
        w.key("re");
        w.value(modal.eigenvalues[j].real());
        w.key("im");
        w.value(modal.eigenvalues[j].imag());
        w.end_object();
    }
    w.end_array();
    w.key("z0");
    w.begin_array();
    for (int j = 0; j < static_cast<int>(z0.size()); ++j) {
        w.begin_object();
        w.key("re");
        w.value(z0[j].real());
        w.key("im");
        w.value(z0[j].imag());
        w.end_object();
    }
    w.end_array();
    w.key("detuning_floor");
    w.value(h.detuning_floor);
    w.key("h_masked_count");
    w.value(h.masked_count);
    w.key("h");
    w.begin_array();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                w.begin_object();
                w.key("j");
                w.value(j);
                w.key("k");
                w.value(k);
                w.key("l");
                w.value(l);
                w.key("re");
                w.value(h.h[static_cast<std::size_t>(j)](k, l).real());
                w.key("im");
                w.value(h.h[static_cast<std::size_t>(j)](k, l).imag());
                w.key("masked");
                w.value_bool(h.masked[static_cast<std::size_t>(j)](k, l) != 0);
                w.end_object();
            }
    w.end_array();
    w.key("resonance_degree");
    w.begin_object();
    w.key("min_detuning");
    w.value(degree.min_detuning);
    w.key("k");
    w.value(degree.k);
    w.key("l");
    w.value(degree.l);
    w.key("j");
    w.value(degree.j);
    w.end_object();
    w.end_object();
    return w.str() + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoFailure("write to '" + path + "' failed");
}

} // namespace ringdown
