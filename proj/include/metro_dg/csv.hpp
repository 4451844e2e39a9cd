#pragma once

// Text formats for curves, timetables and passenger profiles.
//
//   curve:     "# unit=MW|pu" comment, header "time_min,power", one row per sample
//   timetable: header "start_min,end_min,headway_min"
//   profile:   header "time_min,intensity"
//
// Lines starting with '#' and blank lines are ignored apart from the unit comment.

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "metro_dg/curve.hpp"
#include "metro_dg/demand.hpp"
#include "metro_dg/error.hpp"

namespace metro_dg {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace detail {

struct CsvRow {
    int line;
    std::vector<double> fields;
};

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<CsvRow> rows;
};

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::string where(std::string_view source, int line) {
    return std::string(source) + ":" + std::to_string(line);
}

template <std::size_t N>
CsvTable read_table(std::istream& in, std::string_view source, const std::array<std::string_view, N>& header) {
    CsvTable table;
    std::string raw;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            table.comments.emplace_back(trim(line.substr(1)));
            continue;
        }
        auto cells = split_commas(line);
        if (!have_header) {
            bool ok = cells.size() == N;
            for (std::size_t i = 0; ok && i < N; ++i) ok = cells[i] == header[i];
            if (!ok) {
                std::string expected;
                for (std::size_t i = 0; i < N; ++i) expected += (i ? "," : "") + std::string(header[i]);
                throw Error(ErrorKind::Parse, where(source, line_no) + ": expected header '" + expected + "'");
            }
            have_header = true;
            continue;
        }
        if (cells.size() != N) {
            throw Error(ErrorKind::Parse, where(source, line_no) + ": expected " + std::to_string(N) + " fields, got " +
                                              std::to_string(cells.size()));
        }
        CsvRow row{line_no, {}};
        for (std::size_t i = 0; i < N; ++i) {
            double v = 0.0;
            auto cell = cells[i];
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw Error(ErrorKind::Parse, where(source, line_no) + ": field '" + std::string(header[i]) +
                                                  "' is not a number: '" + std::string(cell) + "'");
            }
            row.fields.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw Error(ErrorKind::Parse, std::string(source) + ": missing header line");
    return table;
}

/// Infers the grid from the row count and checks that time stamps sit on it.
inline TimeGrid infer_grid(const CsvTable& table, std::string_view source) {
    const auto n = table.rows.size();
    if (n == 0 || kMinutesPerDay % n != 0 || !TimeGrid::is_supported_step(kMinutesPerDay / static_cast<int>(n))) {
        throw Error(ErrorKind::Parse, std::string(source) + ": " + std::to_string(n) +
                                          " rows do not form a day on a 1, 5, 15, 30 or 60 minute grid");
    }
    TimeGrid grid(kMinutesPerDay / static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (table.rows[i].fields[0] != grid.sample_start(i)) {
            throw Error(ErrorKind::Parse, where(source, table.rows[i].line) + ": time_min should be " +
                                              std::to_string(grid.sample_start(i)));
        }
    }
    return grid;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    return in;
}

}  // namespace detail

inline LoadCurve parse_curve_csv(std::istream& in, std::string_view source = "<curve>") {
    auto table = detail::read_table<2>(in, source, {"time_min", "power"});
    Unit unit = Unit::MW;
    for (const auto& c : table.comments) {
        std::string_view sv = c;
        if (sv.starts_with("unit=")) unit = parse_unit(sv.substr(5));
    }
    TimeGrid grid = detail::infer_grid(table, source);
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (!(row.fields[1] >= 0.0) || !std::isfinite(row.fields[1])) {
            throw Error(ErrorKind::Parse, detail::where(source, row.line) + ": power must be finite and non-negative");
        }
        values.push_back(row.fields[1]);
    }
    return {grid, std::move(values), unit};
}

inline LoadCurve read_curve_csv(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return parse_curve_csv(in, path.string());
}

inline void write_curve_csv(std::ostream& out, const LoadCurve& curve) {
    out << "# unit=" << to_string(curve.unit()) << "\n";
    out << "time_min,power\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out << curve.grid().sample_start(i) << ',' << format_double(curve[i]) << '\n';
    }
}

inline std::string curve_to_csv(const LoadCurve& curve) {
    std::ostringstream out;
    write_curve_csv(out, curve);
    return out.str();
}

inline std::vector<ServiceInterval> parse_timetable_csv(std::istream& in, std::string_view source = "<timetable>") {
    auto table = detail::read_table<3>(in, source, {"start_min", "end_min", "headway_min"});
    std::vector<ServiceInterval> intervals;
    for (const auto& row : table.rows) {
        const double start = row.fields[0];
        const double end = row.fields[1];
        if (start != std::floor(start) || end != std::floor(end) || start < 0 || end > kMinutesPerDay) {
            throw Error(ErrorKind::Parse,
                        detail::where(source, row.line) + ": start_min and end_min must be whole minutes in [0, 1440]");
        }
        try {
            intervals.push_back({TimeWindow(static_cast<int>(start), static_cast<int>(end)), row.fields[2]});
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, detail::where(source, row.line) + ": " + e.detail());
        }
    }
    return intervals;
}

inline std::vector<ServiceInterval> read_timetable_csv(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return parse_timetable_csv(in, path.string());
}

inline PassengerProfile parse_profile_csv(std::istream& in, std::string_view source = "<profile>") {
    auto table = detail::read_table<2>(in, source, {"time_min", "intensity"});
    TimeGrid grid = detail::infer_grid(table, source);
    std::vector<double> intensity;
    intensity.reserve(table.rows.size());
    for (const auto& row : table.rows) intensity.push_back(row.fields[1]);
    return {grid, std::move(intensity)};
}

inline PassengerProfile read_profile_csv(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return parse_profile_csv(in, path.string());
}

inline void write_profile_csv(std::ostream& out, const PassengerProfile& profile) {
    out << "time_min,intensity\n";
    for (std::size_t i = 0; i < profile.intensity().size(); ++i) {
        out << profile.grid().sample_start(i) << ',' << format_double(profile.intensity()[i]) << '\n';
    }
}

inline void write_timetable_csv(std::ostream& out, const ServiceTimetable& timetable) {
    out << "start_min,end_min,headway_min\n";
    for (const auto& iv : timetable.intervals()) {
        out << iv.window.start_minute() << ',' << iv.window.end_minute() << ',' << format_double(iv.headway_minutes)
            << '\n';
    }
}

}  // namespace metro_dg
