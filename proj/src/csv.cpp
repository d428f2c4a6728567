#include "ringdown/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ringdown/errors.hpp"

namespace ringdown {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string num12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

Signal load_waveforms(const std::string& path, WaveformFormat) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile("'" + path + "' is empty");
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = strip(h);
    if (header.size() < 2 || header[0] != "time")
        throw MalformedHeader("expected header 'time,<ch1>,...' in '" + path + "'");
    std::vector<std::string> names(header.begin() + 1, header.end());
    for (const auto& n : names)
        if (n.empty()) throw MalformedHeader("empty channel name in '" + path + "'");

    std::vector<double> times;
    std::vector<std::vector<double>> channels(names.size());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw IngestError("row " + std::to_string(lineno) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(header.size()));
        std::vector<double> vals(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                std::size_t used = 0;
                vals[c] = std::stod(strip(cells[c]), &used);
                if (used != strip(cells[c]).size()) throw std::invalid_argument("junk");
            } catch (const std::exception&) {
                throw IngestError("row " + std::to_string(lineno) + " holds a non-numeric cell");
            }
            if (!std::isfinite(vals[c]))
                throw IngestError("row " + std::to_string(lineno) + " holds a non-finite value");
        }
        times.push_back(vals[0]);
        for (std::size_t c = 0; c < names.size(); ++c) channels[c].push_back(vals[c + 1]);
    }

    if (times.size() < 2) throw EmptyFile("'" + path + "' holds fewer than two samples");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw NonMonotoneTime("time column must be strictly ascending");

    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double step = times[k] - times[k - 1];
        if (std::abs(step - dt) > 1e-6 * dt)
            throw NonUniformSampling("sampling jitter exceeds 1e-6 near row " +
                                     std::to_string(k + 1));
    }

    return Signal(times.front(), dt, std::move(names), std::move(channels));
}

void write_waveforms(const std::string& path, const Signal& signal) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!out) throw IoFailure("cannot open '" + path + "' for writing");
    out << "time";
    for (const auto& n : signal.channel_names()) out << ',' << n;
    out << '\n';
    for (std::size_t k = 0; k < signal.size(); ++k) {
        out << num12(signal.time(k));
        for (std::size_t c = 0; c < signal.channel_count(); ++c)
            out << ',' << num12(signal.channel(c)[k]);
        out << '\n';
    }
    if (!out) throw IoFailure("write to '" + path + "' failed");
}

} // namespace ringdown
