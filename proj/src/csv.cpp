#include "aep/csv.hpp"

#include <charconv>
#include <limits>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aep/error.hpp"

namespace aep {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_double(const std::string& cell, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        fail(Errc::parse_error, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
    return v;
}

std::int64_t parse_int(const std::string& cell, std::size_t line_no) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        fail(Errc::parse_error, "line " + std::to_string(line_no) + ": bad tick '" + cell + "'");
    return v;
}

void format_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

} // namespace

TimeSeries ingest_csv(const std::string& path, int tick_minutes) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) fail(Errc::parse_error, "line 1: empty file");
    const auto header = split_commas(strip_cr(line));
    if (header.size() < 3 || header.front() != "tick" || header.back() != "event")
        fail(Errc::parse_error, "line 1: header must be tick,<features...>,event");
    const std::size_t d = header.size() - 2;

    TimeSeries series;
    series.tick_minutes = tick_minutes;
    series.feature_names.assign(header.begin() + 1, header.end() - 1);

    std::vector<double> values;
    LabelVec labels;
    std::int64_t previous_tick = 0;
    bool first_row = true;
    std::size_t line_no = 1;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = strip_cr(line);
        if (row.empty()) continue;
        const auto cells = split_commas(row);
        if (cells.size() != header.size())
            fail(Errc::parse_error, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " cells, found " +
                                        std::to_string(cells.size()));
        const std::int64_t tick = parse_int(cells[0], line_no);
        if (!first_row && tick != previous_tick + 1)
            fail(Errc::non_uniform_ticks, "line " + std::to_string(line_no) + ": tick " +
                                              std::to_string(tick) + " does not follow " +
                                              std::to_string(previous_tick));
        previous_tick = tick;
        first_row = false;

        for (std::size_t f = 0; f < d; ++f) {
            const std::string& cell = cells[1 + f];
            values.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN()
                                          : parse_double(cell, line_no));
        }
        const std::string& ev = cells.back();
        if (ev == "0") labels.push_back(0);
        else if (ev == "1") labels.push_back(1);
        else
            fail(Errc::bad_event_value,
                 "line " + std::to_string(line_no) + ": event must be 0 or 1, found '" + ev + "'");
    }
    if (labels.empty()) fail(Errc::parse_error, "no data rows");

    series.features = Matrix(labels.size(), d);
    series.features.data = std::move(values);
    series.event_labels = std::move(labels);
    series.validate();
    return series;
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) fail(Errc::io_error, "cannot write '" + path + "'");

    std::string buffer = "tick";
    for (std::size_t f = 0; f < series.dims(); ++f) {
        buffer += ',';
        buffer += f < series.feature_names.size() ? series.feature_names[f]
                                                  : "f" + std::to_string(f + 1);
    }
    buffer += ",event\n";

    for (std::size_t t = 0; t < series.n_ticks(); ++t) {
        buffer += std::to_string(t + 1);
        for (std::size_t f = 0; f < series.dims(); ++f) {
            buffer += ',';
            const double v = series.features(t, f);
            if (!TimeSeries::is_missing(v)) format_double(buffer, v);
        }
        buffer += ',';
        buffer += series.event_labels[t] ? '1' : '0';
        buffer += '\n';
        if (buffer.size() > (1 << 20)) {
            out << buffer;
            buffer.clear();
        }
    }
    out << buffer;
    if (!out) fail(Errc::io_error, "failed writing '" + path + "'");
}

} // namespace aep
