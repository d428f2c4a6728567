#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringdown/metrics.hpp"
#include "ringdown/modeshape.hpp"
#include "ringdown/normalform.hpp"
#include "ringdown/prony.hpp"
#include "ringdown/resonance.hpp"

namespace ringdown {

/// Minimal JSON emitter with pinned key order and %.12g number formatting so
/// identical inputs always produce byte-identical reports.
class JsonWriter {
public:
    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(const std::string& name);
    void value(double v);
    void value(int v);
    void value(const std::string& v);
    void value(const char* v) { value(std::string(v)); }
    void value_bool(bool v);
    void null();

    const std::string& str() const { return out_; }
    static std::string format_number(double v);

private:
    void prefix();
    std::string out_;
    std::vector<char> stack_;     // '{' or '['
    std::vector<bool> has_items_;
    bool pending_key_ = false;
};

inline constexpr int kReportSchemaVersion = 1;

/// A mode report aggregates conjugate pairs: one row per dc mode or
/// positive-frequency pair, amplitude 2|B| for pairs and |B| for dc.
struct ReportMode {
    std::string kind;
    double freq_hz = 0.0;
    double damping = 0.0;
    double amplitude = 0.0;
    double phase_deg = 0.0;
    std::optional<std::pair<int, int>> parents; // aggregated natural mode ids
    std::optional<double> detuning;
};

/// Collapse a conjugate-closed ModeSet into per-pair rows. `pair_id_of`
/// (optional, size = set.modes.size()) receives the row index of every
/// underlying mode, so parents can be remapped between sets.
std::vector<ReportMode> aggregate_modes(const ModeSet& set,
                                        std::vector<int>* pair_id_of = nullptr);

std::string render_modeset_report(const ModeSet& set, const std::string& channel);
std::string render_extended_report(const ExtendedResult& result, const std::string& channel,
                                   const std::vector<ModeShape>& shapes = {});
std::string render_error_report(const std::vector<std::string>& labels,
                                const std::vector<ErrorReport>& reports);
std::string render_normalform_report(const ModalModel& modal, const HTensor& h,
                                     const ResonanceDegree& degree,
                                     const Eigen::VectorXcd& z0);

void write_text_file(const std::string& path, const std::string& content);

void append_shape(JsonWriter& w, const ModeShape& shape);

} // namespace ringdown
