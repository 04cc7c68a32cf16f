#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "plr/errors.hpp"
#include "plr/model.hpp"
#include "plr/schedule.hpp"
#include "plr/simulation.hpp"

namespace plr {

struct MeasuredSample {
    double time_ms = 0.0;
    double diameter_mm = 0.0;
};

struct MeasuredSeries {
    std::vector<MeasuredSample> samples;
    // Capture metadata; kept in memory, not serialized into the CSV.
    double iris_px_diameter = 0.0;
    double frame_rate_hz = 0.0;
};

namespace detail {

// %.17g round-trips every double exactly.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline double parse_field(std::string_view field, const std::string& path, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError(path, line_no, "bad number '" + std::string(field) + "'");
    return v;
}

// Header-checked CSV walk; fn sees the parsed fields and the 1-based line number.
template <typename RowFn>
void parse_csv(const std::string& path, const std::string& header, std::size_t num_fields,
               RowFn&& fn) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(path, 1, "missing header");
    strip_cr(line);
    if (line != header)
        throw ParseError(path, 1, "expected header '" + header + "'");

    std::vector<double> fields(num_fields);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        std::string_view rest = line;
        for (std::size_t i = 0; i < num_fields; ++i) {
            const std::size_t comma = rest.find(',');
            const bool last_field = (i + 1 == num_fields);
            if (last_field != (comma == std::string_view::npos))
                throw ParseError(path, line_no, "expected " + std::to_string(num_fields) + " fields");
            fields[i] = parse_field(last_field ? rest : rest.substr(0, comma), path, line_no);
            if (!last_field) rest = rest.substr(comma + 1);
        }
        fn(fields, line_no);
    }
}

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical across runs
    if (!out)
        throw std::invalid_argument("cannot open " + path);
    return out;
}

}  // namespace detail

inline constexpr const char* kScheduleHeader = "time_ms,luminance_blondels";
inline constexpr const char* kTraceHeader =
    "time_ms,luminance_blondels,flux_lumens,diameter_raw_mm,diameter_final_mm";
inline constexpr const char* kMeasuredHeader = "time_ms,diameter_mm";
inline constexpr const char* kFitSamplesHeader = "luminance_blondels,diameter_mm";

inline LightSchedule parse_schedule(const std::string& path) {
    std::vector<SchedulePoint> points;
    detail::parse_csv(path, kScheduleHeader, 2, [&](const std::vector<double>& f, std::size_t line_no) {
        if (points.empty() && f[0] != 0.0)
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": first segment must start at t=0");
        if (!points.empty() && !(f[0] > points.back().time_ms))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": time not strictly increasing");
        if (!(f[1] >= kMinLuminanceB && f[1] <= kMaxLuminanceB))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": luminance outside [1e-5, 1e5] B");
        points.push_back({f[0], f[1]});
    });
    return LightSchedule(std::move(points));
}

inline void write_schedule(const std::string& path, const LightSchedule& schedule) {
    auto out = detail::open_for_write(path);
    out << kScheduleHeader << "\n";
    for (const auto& p : schedule.points())
        out << detail::format_double(p.time_ms) << ","
            << detail::format_double(p.luminance_blondels) << "\n";
}

inline void write_trace(const std::string& path, const SimTrace& trace) {
    auto out = detail::open_for_write(path);
    out << kTraceHeader << "\n";
    for (const auto& r : trace.rows)
        out << detail::format_double(r.time_ms) << ","
            << detail::format_double(r.luminance_blondels) << ","
            << detail::format_double(r.flux_lumens) << ","
            << detail::format_double(r.diameter_raw_mm) << ","
            << detail::format_double(r.diameter_final_mm) << "\n";
}

inline SimTrace parse_trace(const std::string& path) {
    SimTrace trace;
    detail::parse_csv(path, kTraceHeader, 5, [&](const std::vector<double>& f, std::size_t line_no) {
        if (!trace.rows.empty() && !(f[0] > trace.rows.back().time_ms))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                             ": time not strictly increasing");
        for (const double v : f)
            if (!std::isfinite(v))
                throw ValidationError(path + ":" + std::to_string(line_no) + ": non-finite value");
        trace.rows.push_back({f[0], f[1], f[2], f[3], f[4]});
    });
    return trace;
}

inline void write_measured(const std::string& path, const MeasuredSeries& series) {
    auto out = detail::open_for_write(path);
    out << kMeasuredHeader << "\n";
    for (const auto& s : series.samples)
        out << detail::format_double(s.time_ms) << ","
            << detail::format_double(s.diameter_mm) << "\n";
}

inline MeasuredSeries parse_measured(const std::string& path) {
    MeasuredSeries series;
    detail::parse_csv(path, kMeasuredHeader, 2, [&](const std::vector<double>& f, std::size_t line_no) {
        if (!series.samples.empty() && !(f[0] > series.samples.back().time_ms))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": time not strictly increasing");
        if (!(f[1] > 0.0 && f[1] < 12.0))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": diameter outside (0, 12) mm");
        series.samples.push_back({f[0], f[1]});
    });
    return series;
}

inline std::vector<EquilibriumSample> parse_fit_samples(const std::string& path) {
    std::vector<EquilibriumSample> samples;
    detail::parse_csv(path, kFitSamplesHeader, 2, [&](const std::vector<double>& f, std::size_t) {
        samples.push_back({f[0], f[1]});
    });
    return samples;
}

// Mean absolute diameter difference over the overlapping time span, comparing each
// measured sample against the nearest-in-time simulated row's final diameter.
inline double trace_error(const SimTrace& sim, const MeasuredSeries& measured) {
    if (sim.rows.empty() || measured.samples.empty())
        throw std::invalid_argument("trace_error: empty input");
    const double lo = std::max(sim.rows.front().time_ms, measured.samples.front().time_ms);
    const double hi = std::min(sim.rows.back().time_ms, measured.samples.back().time_ms);
    if (!(lo <= hi))
        throw std::invalid_argument("trace_error: no overlapping time range");

    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& m : measured.samples) {
        if (m.time_ms < lo || m.time_ms > hi) continue;
        const auto it = std::lower_bound(
            sim.rows.begin(), sim.rows.end(), m.time_ms,
            [](const TraceRow& row, double t) { return row.time_ms < t; });
        const TraceRow* best = nullptr;
        if (it != sim.rows.end()) best = &*it;
        if (it != sim.rows.begin()) {
            const TraceRow* prev = &*(it - 1);
            if (best == nullptr ||
                std::fabs(prev->time_ms - m.time_ms) <= std::fabs(best->time_ms - m.time_ms))
                best = prev;
        }
        sum += std::fabs(best->diameter_final_mm - m.diameter_mm);
        ++count;
    }
    if (count == 0)
        throw std::invalid_argument("trace_error: no measured samples in overlap");
    return sum / static_cast<double>(count);
}

}  // namespace plr
